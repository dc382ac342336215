#include "gaborwf/catalog.hpp"
#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

int run_command(const std::string& target, const gwf::RunOptions& opt, bool verbose) {
    gwf::ScenarioConfig sc;
    if (std::filesystem::exists(target)) {
        sc = gwf::load_scenario(target);
    } else {
        const auto names = gwf::catalog_names();
        if (std::find(names.begin(), names.end(), target) == names.end())
            throw std::runtime_error("no such config file or catalog scenario: " + target);
        sc = gwf::catalog_scenario(target);
    }

    const gwf::ScenarioArtifacts art = gwf::run_scenario(sc, opt);
    const std::string path = gwf::write_artifacts(sc, art, opt.out_dir);
    std::cout << path << "\n";

    if (verbose) {
        const auto& rep = art.report;
        std::cout << "singular space dimension: "
                  << rep.at("singular_space").at("dimension").get<int>() << "\n";
        for (const auto& jt : rep.at("times")) {
            std::cout << "t = " << jt.at("t").get<double>() << ": bound "
                      << (jt.at("propagation").at("bound_singular").at("empty").get<bool>()
                              ? "empty"
                              : "nonempty");
            if (jt.contains("detector")) {
                std::cout << ", detector caps:";
                const auto& caps = jt.at("detector").at("wf").at("caps");
                if (caps.empty()) std::cout << " none";
                for (const auto& c : caps) std::cout << " " << c.at("center_deg").get<double>()
                                                     << "deg";
            }
            std::cout << "\n";
        }
        const auto bad = gwf::expected_mismatches(sc, art.report);
        if (sc.expected.is_null())
            std::cout << "no expected block to check\n";
        else if (bad.empty())
            std::cout << "expected block: all checks passed\n";
        else
            for (const auto& m : bad) std::cout << "expected mismatch: " << m << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gabor wave-front propagation for quadratic semigroups"};
    app.require_subcommand(1);

    std::string out_dir;
    if (const char* env = std::getenv("GABORWF_OUT")) out_dir = env;
    if (out_dir.empty()) out_dir = "out";
    std::uint64_t seed = 0;
    int threads = 0;
    bool verbose = false;
    app.add_option("--out", out_dir, "output directory (overrides GABORWF_OUT)");
    app.add_option("--seed", seed, "seed for the randomized diagnostics");
    app.add_option("--threads", threads, "thread budget, 0 = hardware concurrency");
    app.add_flag("--verbose", verbose, "print run summary and expected-block checks");

    std::string target;
    CLI::App* run = app.add_subcommand("run", "run a scenario config (path or catalog name)");
    run->add_option("config", target, "JSON config path or built-in scenario name")->required();

    std::string write_dir;
    CLI::App* cat = app.add_subcommand("catalog", "list built-in scenarios");
    cat->add_option("--write", write_dir, "also write the scenario JSON files to this directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cat->parsed()) {
            for (const auto& name : gwf::catalog_names()) {
                const auto sc = gwf::catalog_scenario(name);
                std::string note;
                if (sc.expected.contains("note")) note = sc.expected.at("note").get<std::string>();
                std::cout << name << (note.empty() ? "" : "  -- " + note) << "\n";
            }
            if (!write_dir.empty()) {
                gwf::write_catalog(write_dir);
                std::cout << "wrote " << gwf::catalog_names().size() << " configs to " << write_dir
                          << "\n";
            }
            return 0;
        }
        gwf::RunOptions opt;
        opt.out_dir = out_dir;
        opt.seed = seed;
        opt.threads = threads;
        opt.verbose = verbose;
        return run_command(target, opt, verbose);
    } catch (const gwf::invariant_violation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const gwf::not_positive_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
