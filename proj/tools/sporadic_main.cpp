#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sporadic/config.hpp"
#include "sporadic/ensemble.hpp"
#include "sporadic/error.hpp"
#include "sporadic/experiments.hpp"

namespace {

int report(const std::string& type, const std::string& message, int code, std::size_t line = 0) {
    nlohmann::json err{{"type", type}, {"message", message}};
    if (line > 0) err["line"] = line;
    std::cerr << nlohmann::json{{"error", err}}.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume sporadic Anderson model experiments"};
    app.set_version_flag("--version", sporadic::library_version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    unsigned threads = 1;
    std::uint64_t seed = 0;
    for (const char* name : {"spectrum", "dos", "wegner", "minami", "levelstats", "fracmom", "freeres", "checks"}) {
        auto* sub = app.add_subcommand(name, std::string("run a ") + name + " experiment");
        sub->add_option("--config", config_path, "flat key = value config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_option("--seed", seed, "override the master seed");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string kind_name = app.get_subcommands().front()->get_name();
    try {
        const auto config = sporadic::load_config(config_path, sporadic::parse_kind(kind_name));
        sporadic::RunOptions options;
        options.out_dir = out_dir;
        options.threads = threads;
        if (app.get_subcommands().front()->count("--seed")) options.seed_override = seed;
        const auto manifest = sporadic::run_experiment(config, options);
        std::cout << (std::filesystem::path(out_dir) / "manifest.json").string() << "\n";
        for (const auto& f : manifest.files) std::cout << "  " << f.name << "  " << f.sha256 << "\n";
        return 0;
    } catch (const sporadic::ConfigError& e) {
        return report("ConfigError", e.what(), 2, e.line);
    } catch (const sporadic::ValidationError& e) {
        return report("ValidationError", e.what(), 2);
    } catch (const sporadic::DomainError& e) {
        return report("DomainError", e.what(), 3);
    } catch (const sporadic::EnsembleFailure& e) {
        return report("EnsembleFailure", e.what(), 4);
    } catch (const std::exception& e) {
        return report("Error", e.what(), 1);
    }
}
