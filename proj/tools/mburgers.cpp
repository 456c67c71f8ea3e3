#include <iostream>

#include <mburgers/app.hpp>

int main(int argc, char** argv)
{
    try {
        const auto cfg = mburgers::parse_config(argc, argv);
        return mburgers::run(cfg);
    } catch (const mburgers::HelpShown&) {
        return 0;
    } catch (const mburgers::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mburgers::exit_code::config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mburgers::exit_code::solver_failure;
    }
}
