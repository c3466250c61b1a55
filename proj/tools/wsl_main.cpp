#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wsl/experiment.hpp"
#include "wsl/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
};

int run_kind(const std::string& kind, const CommonArgs& args,
             const nlohmann::json& overrides) {
    try {
        nlohmann::json doc = nlohmann::json::parse(wsl::io::read_file(args.config_path));
        doc["experiment"] = kind;
        for (const auto& [k, v] : overrides.items()) doc[k] = v;
        const auto cfg = wsl::runner::parse_config(doc.dump());
        std::optional<std::string> out;
        if (!args.out_dir.empty()) out = args.out_dir;
        const auto outcome = wsl::runner::run(cfg, args.jobs, out);
        std::cout << outcome.summary << "\n";
        return outcome.exit_code;
    } catch (const wsl::runner::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wsl: waveguide spectral laboratory"};
    app.set_help_flag("--help", "print usage"); // frees -h / --h for grid spacing
    app.require_subcommand(1);

    CommonArgs args;
    nlohmann::json overrides = nlohmann::json::object();
    std::string picked_kind;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "experiment config JSON")->required();
        sub->add_option("--out", args.out_dir, "output directory override");
        sub->add_option("--jobs", args.jobs, "parallel workers for sweep/scan points");
    };

    for (const char* kind : {"check-geometry", "scan-resonances", "verify-resfree", "propagate",
                             "verify-identities"}) {
        auto* sub = app.add_subcommand(kind, "");
        add_common(sub);
        sub->callback([&picked_kind, kind] { picked_kind = kind; });
    }

    // sweep-resolvent carries the classic flag overrides.
    {
        auto* sub = app.add_subcommand("sweep-resolvent", "");
        add_common(sub);
        static std::string domain_file;
        static double delta = 0, h = 0, L = 0, emin = 0, emax = 0;
        static int esteps = 0;
        static std::vector<double> epslist;
        sub->add_option("--domain", domain_file, "domain spec JSON file");
        sub->add_option("--delta", delta, "weight exponent delta");
        sub->add_option("--emin", emin, "E range start");
        sub->add_option("--emax", emax, "E range end");
        sub->add_option("--esteps", esteps, "E range steps");
        sub->add_option("--epslist", epslist, "epsilon values");
        sub->add_option("--h", h, "grid spacing");
        sub->add_option("--L", L, "truncation half-length");
        sub->callback([&picked_kind, &overrides, sub] {
            picked_kind = "sweep-resolvent";
            if (sub->count("--domain")) overrides["domain"] = {{"file", domain_file}};
            if (sub->count("--delta")) overrides["delta"] = delta;
            if (sub->count("--h")) overrides["h"] = h;
            if (sub->count("--L")) overrides["L"] = L;
            if (sub->count("--emin") || sub->count("--emax") || sub->count("--esteps"))
                overrides["E"] = {{"min", emin}, {"max", emax}, {"steps", esteps}};
            if (sub->count("--epslist")) overrides["eps"] = epslist;
        });
    }

    {
        auto* sub = app.add_subcommand("report", "consolidate run outputs");
        static std::string dir;
        sub->add_option("--dir", dir, "directory of runs")->required();
        sub->callback([&picked_kind] { picked_kind = "report"; });
        app.parse_complete_callback([] {});
        (void)sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (picked_kind == "report") {
        try {
            const auto* sub = app.get_subcommand("report");
            const std::string dir = sub->get_option("--dir")->as<std::string>();
            const std::string rep = wsl::runner::report(dir);
            std::cout << nlohmann::json::parse(rep)["table"].get<std::string>();
            wsl::io::write_file(dir + "/report.json", rep);
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return run_kind(picked_kind, args, overrides);
}
