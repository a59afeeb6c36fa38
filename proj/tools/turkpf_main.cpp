#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "turkpf/harness.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const turkpf::ParsedCommand parsed = turkpf::parse_config(args);
        using Mode = turkpf::ParsedCommand::Mode;
        if (parsed.mode == Mode::Help) {
            std::cout << parsed.help_text;
            return 0;
        }
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!parsed.config.out_path.empty()) {
            file.open(parsed.config.out_path);
            if (!file) {
                std::cerr << "turkpf: cannot open output file '"
                          << parsed.config.out_path << "'\n";
                return 2;
            }
            out = &file;
        }
        if (parsed.mode == Mode::Trace) {
            turkpf::run_trace(parsed.config, *out);
        } else {
            turkpf::run_sweep(parsed.config, *out);
        }
        out->flush();
        return 0;
    } catch (const turkpf::UsageError& e) {
        std::cerr << "turkpf: " << e.what() << "\n"
                  << "Run 'turkpf --help' for usage.\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "turkpf: error: " << e.what() << "\n";
        return 1;
    }
}
