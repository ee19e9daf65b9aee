// Command-line front end: one subcommand per pipeline stage plus `run` for the whole pipeline.

#include "cloudstore/billing.hpp"
#include "cloudstore/core/errors.hpp"
#include "cloudstore/experiment.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <iostream>

using namespace cloudstore;
namespace fs = std::filesystem;
namespace ex = cloudstore::experiment;

namespace {

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> out;
    int threads = 0;

    fs::path out_at(std::size_t i, const fs::path& fallback = {}) const
    {
        return i < out.size() ? fs::path(out[i]) : fallback;
    }
};

int exit_code(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Infeasible: return 4;
    default: return 3;
    }
}

fs::path require_out(const Globals& g, const char* what)
{
    if (g.out.empty()) throw ConfigError(std::string("--out: ") + what + " required");
    return g.out.front();
}

void write_json(const fs::path& path, const io::json& j)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    io::write_text(path, j.dump(2) + "\n");
}

// synth ---------------------------------------------------------------------------------

struct SynthArgs {
    std::optional<std::size_t> n;
    std::optional<std::size_t> hours;
};

void cmd_synth(const Globals& g, const SynthArgs& a)
{
    auto cfg = g.config.empty() ? data::CohortConfig::standard() : data::cohort_config_from_json(io::load_json(g.config));
    if (g.seed) cfg.seed = *g.seed;
    if (a.n) cfg.n_households = *a.n;
    if (a.hours) cfg.hours = *a.hours;
    cfg.validate();
    fs::path dir = require_out(g, "output directory");
    auto cohort = data::synth_cohort(cfg);
    ex::write_profiles_dir(dir, cohort.profiles);
    for (const auto& [zone, irr] : cohort.irradiance) io::write_series_csv(dir / ("irradiance_" + zone + ".csv"), irr);
    write_json(dir / "cohort.json", data::cohort_config_to_json(cfg));
    std::cout << "synth: " << cohort.profiles.size() << " households, " << cfg.hours << " h -> " << dir.string() << "\n";
}

// household -----------------------------------------------------------------------------

struct HouseholdArgs {
    std::string profiles;
    std::string tariff;
    std::string menu;
};

void cmd_household(const Globals& g, const HouseholdArgs& a)
{
    fs::path out = require_out(g, "decisions.csv path");
    auto meter = ex::load_profiles_dir(a.profiles);
    for (const auto& s : meter.skipped) std::cerr << "skipped household " << s.id << ": " << s.reason << "\n";
    if (meter.profiles.empty()) throw ValidationError("no usable households in " + a.profiles);
    auto tariff = ex::load_tariff_or_default(a.tariff);
    auto menu = a.menu.empty() ? household::ContractMenu::standard({10, 20, 30}, {2, 4}) : ex::read_menu_json(a.menu);
    auto decisions = household::cohort_decisions(meter.profiles, tariff, menu);

    std::vector<DispatchResult> dispatches;
    for (auto& d : decisions) dispatches.push_back(d.dispatch);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    ex::write_decisions_csv(out, ex::decision_rows(decisions));
    fs::path agg = g.out_at(1, out.parent_path() / "aggregate.csv");
    io::write_series_csv(agg, aggregate::aggregate_schedules(dispatches));
    std::cout << "household: " << decisions.size() << " decisions -> " << out.string() << ", " << agg.string() << "\n";
}

// cso -----------------------------------------------------------------------------------

struct CsoArgs {
    std::string decisions;
    std::string aggregate;
    std::string tariff;
    std::string mode = "external";
    double ratio = 4.0;
    bool sweep = false;
    std::size_t points = 42;
    std::optional<double> capacity;
};

void cmd_cso(const Globals& g, const CsoArgs& a)
{
    fs::path out = require_out(g, "outcome.json path");
    auto rows = ex::read_decisions_csv(a.decisions);
    fs::path agg_path = a.aggregate.empty() ? fs::path(a.decisions).parent_path() / "aggregate.csv" : fs::path(a.aggregate);
    auto command = io::read_series_csv(agg_path);
    auto prices = expand_tariff(ex::load_tariff_or_default(a.tariff), command.start(), command.size());

    double revenue = 0.0, cv = 0.0;
    for (const auto& r : rows) {
        revenue += r.fee;
        cv += r.capacity_kwh;
    }
    auto mode = ex::parse_mode(a.mode);
    if (mode == ex::Mode::Multiservice) throw ConfigError("--mode: use the multiservice subcommand");
    ex::CsoRequest req{command, revenue, cv, prices.purchase, prices.injection, mode, a.ratio, a.sweep, a.points,
                       a.capacity, {}};
    auto report = ex::run_cso(req);
    write_json(out, ex::outcome_json(req, report));
    ex::write_dispatch_csv(out.parent_path() / "dispatch.csv",
                           {command, report.outcome.dispatch, prices.purchase, prices.injection});
    if (report.sweep) ex::write_curve_csv(g.out_at(1, out.parent_path() / "curve.csv"), *report.sweep);
    std::cout << "cso: battery " << io::format_number(report.battery.capacity) << " kWh, profit "
              << io::format_number(report.outcome.profit) << " $/yr\n";
}

// metrics -------------------------------------------------------------------------------

struct MetricsArgs {
    std::string dispatch;
    std::optional<double> capacity;
    std::optional<double> rate;
};

void cmd_metrics(const Globals& g, const MetricsArgs& a)
{
    fs::path out = require_out(g, "metrics JSON path");
    auto table = ex::read_dispatch_csv(a.dispatch);
    auto stats = metrics::blocking_distribution(table.dispatch.mismatch);
    io::json j = {{"blocking", ex::blocking_stats_json(stats)}};
    if (a.capacity) {
        double rate = a.rate.value_or(*a.capacity / 4.0);
        BatterySpec battery{*a.capacity, rate, table.dispatch.initial_soc};
        auto c = metrics::constraint_decomposition(table.command, battery);
        j["constraints"] = {{"rate_limited", c.rate_limited}, {"full", c.full}, {"empty", c.empty},
                            {"blocked", c.blocked},           {"any_cause", c.any_cause}};
    }
    write_json(out, j);
    fs::path hist = g.out_at(1, out.parent_path() / "blocking_histogram.csv");
    io::write_text(hist, ex::histogram_csv(stats));
    std::cout << "metrics: blocking probability " << io::format_number(stats.probability) << "\n";
}

// multiservice --------------------------------------------------------------------------

struct MultiserviceArgs {
    std::string aggregate;
    std::string tariff;
    std::string envelope;
    bool synth = false;
    double full = 0.87;
    double zero = 0.05;
    double capacity = 0.0;
    double ratio = 4.0;
};

void cmd_multiservice(const Globals& g, const MultiserviceArgs& a)
{
    fs::path out = require_out(g, "output JSON path");
    if (a.synth == !a.envelope.empty()) throw ConfigError("multiservice: give exactly one of --envelope or --synth");
    if (!costmodel::is_supported_ratio(a.ratio)) throw ConfigError("--ratio: supported values are 2 and 4");
    auto command = io::read_series_csv(a.aggregate);
    auto prices = expand_tariff(ex::load_tariff_or_default(a.tariff), command.start(), command.size());
    auto battery = aggregate::sweep_battery(command, a.capacity, a.ratio);
    std::uint64_t seed = g.seed.value_or(42);
    auto envelope = a.synth ? multiservice::synth_envelope(battery, {a.full, a.zero, 1.0},
                                                           multiservice::synth_wind_driver(command.start(),
                                                                                           command.size(), seed),
                                                           seed)
                            : multiservice::read_envelope_csv(a.envelope);
    envelope.validate(battery);

    auto full = aggregate::project_follow({command, battery, a.ratio, prices.purchase, prices.injection, true});
    auto env = multiservice::project_follow_envelope(command, battery, envelope);
    auto summary = [&](const DispatchResult& d) {
        double cost = aggregate::annualize_horizon(
            aggregate::blocking_cost(d.mismatch, prices.purchase, prices.injection), command.size());
        return io::json{{"blocking_probability", metrics::blocking_probability(d.mismatch)}, {"blocking_cost", cost}};
    };
    auto est = multiservice::envelope_stats(envelope, battery);
    io::json j = {{"battery", {{"capacity_kwh", battery.capacity}, {"rate_kw", battery.rate},
                               {"initial_soc_kwh", battery.initial_soc}}},
                  {"envelope", {{"full_availability", est.full_availability},
                                {"zero_availability", est.zero_availability},
                                {"mean_residual", est.mean_residual}}},
                  {"full_availability_case", summary(full)},
                  {"envelope_case", summary(env)}};
    write_json(out, j);
    auto dir = out.parent_path();
    if (a.synth) multiservice::write_envelope_csv(dir / "envelope.csv", envelope);
    ex::write_dispatch_csv(dir / "dispatch_envelope.csv", {command, env, prices.purchase, prices.injection});
    std::cout << "multiservice: blocking probability " << io::format_number(j["full_availability_case"]["blocking_probability"].get<double>())
              << " -> " << io::format_number(j["envelope_case"]["blocking_probability"].get<double>()) << "\n";
}

// run / validate / bill -----------------------------------------------------------------

void cmd_run(const Globals& g)
{
    if (g.config.empty()) throw ConfigError("--config: required");
    auto cfg = ex::load_config(g.config);
    if (g.seed) {
        cfg.seed = *g.seed;
        cfg.cohort.seed = *g.seed;
        cfg.clustering.seed = *g.seed;
    }
    if (!g.out.empty()) cfg.output_dir = g.out.front();
    auto summary = ex::run_experiment(cfg, g.config);
    const auto& o = summary.report.outcome;
    std::cout << "run: " << summary.files.size() << " files -> " << summary.output_dir.string() << "\n"
              << "  battery " << io::format_number(summary.report.battery.capacity) << " kWh, revenue "
              << io::format_number(o.revenue) << ", investment " << io::format_number(o.investment) << ", blocking "
              << io::format_number(o.blocking_cost) << ", profit " << io::format_number(o.profit) << " $/yr\n";
}

int cmd_validate(const Globals& g)
{
    if (g.config.empty()) throw ConfigError("--config: required");
    auto errors = ex::validate_config(g.config);
    if (errors.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const auto& e : errors) std::cerr << "error: " << e << "\n";
    return 2;
}

struct BillArgs {
    std::string load;
    std::string pv;
    std::string action;
    std::string tariff;
};

void cmd_bill(const Globals& g, const BillArgs& a)
{
    auto load = io::read_series_csv(a.load);
    auto pv = a.pv.empty() ? HourlySeries::zeros_like(load) : io::read_series_csv(a.pv);
    auto action = a.action.empty() ? HourlySeries::zeros_like(load) : io::read_series_csv(a.action);
    auto bill = billing::compute_bill(billing::net_demand(load, pv, action), ex::load_tariff_or_default(a.tariff));
    io::json j = {{"total", bill.total},
                  {"purchased_energy_kwh", bill.purchased_energy},
                  {"injected_energy_kwh", bill.injected_energy},
                  {"start", format_hour(load.start())},
                  {"hours", load.size()}};
    if (g.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        write_json(g.out.front(), j);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cloud Storage simulator: household contracts, CSO sizing and blocking metrics"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config, "Config JSON (cohort config for synth, experiment config for run/validate)");
    app.add_option("--seed", g.seed, "Override the seed");
    app.add_option("--out", g.out, "Output path(s)")->expected(1, 2);
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = runtime default)")->check(CLI::NonNegativeNumber);

    SynthArgs synth;
    auto* s = app.add_subcommand("synth", "Generate a synthetic cohort directory (load.csv, pv.csv, irradiance)");
    s->add_option("--n", synth.n, "Number of households");
    s->add_option("--hours", synth.hours, "Horizon length in hours");

    HouseholdArgs hh;
    auto* h = app.add_subcommand("household", "Per-household contract choice; --out decisions.csv [aggregate.csv]");
    h->add_option("--profiles", hh.profiles, "Directory with load.csv and optional pv.csv")->required();
    h->add_option("--tariff", hh.tariff, "Tariff JSON (default PG&E E-TOU B)");
    h->add_option("--menu", hh.menu, "Contract menu JSON");

    CsoArgs cso;
    auto* c = app.add_subcommand("cso", "CSO battery sizing and profit; --out outcome.json [curve.csv]");
    c->add_option("--decisions", cso.decisions, "decisions.csv")->required();
    c->add_option("--aggregate", cso.aggregate, "Aggregate command CSV (default: aggregate.csv beside decisions)");
    c->add_option("--tariff", cso.tariff, "Tariff JSON (default PG&E E-TOU B)");
    c->add_option("--mode", cso.mode, "no-external or external");
    c->add_option("--ratio", cso.ratio, "Physical battery capacity/rate ratio (2 or 4)");
    c->add_flag("--sweep", cso.sweep, "Evaluate the profit curve over battery sizes");
    c->add_option("--points", cso.points, "Sweep grid points");
    c->add_option("--capacity", cso.capacity, "Fixed battery capacity in kWh");

    MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "Blocking statistics of a dispatch CSV; --out metrics.json [histogram.csv]");
    m->add_option("--dispatch", met.dispatch, "dispatch.csv")->required();
    m->add_option("--capacity", met.capacity, "Battery capacity for the constraint breakdown");
    m->add_option("--rate", met.rate, "Battery rate (default capacity / 4)");

    MultiserviceArgs ms;
    auto* u = app.add_subcommand("multiservice", "Cloud Storage under a congestion-management envelope");
    u->add_option("--aggregate", ms.aggregate, "Aggregate command CSV")->required();
    u->add_option("--tariff", ms.tariff, "Tariff JSON (default PG&E E-TOU B)");
    u->add_option("--capacity", ms.capacity, "Physical battery capacity in kWh")->required();
    u->add_option("--ratio", ms.ratio, "Capacity/rate ratio (2 or 4)");
    u->add_option("--envelope", ms.envelope, "Envelope CSV");
    u->add_flag("--synth", ms.synth, "Synthesize the envelope");
    u->add_option("--full", ms.full, "Target fully-available share of hours");
    u->add_option("--zero", ms.zero, "Target zero-availability share of hours");

    app.add_subcommand("run", "Full pipeline from an experiment config");
    app.add_subcommand("validate", "Check an experiment config without running it");

    BillArgs bl;
    auto* b = app.add_subcommand("bill", "Energy bill of load/pv/action series under a tariff");
    b->add_option("--load", bl.load, "Load series CSV (kWh)")->required();
    b->add_option("--pv", bl.pv, "PV series CSV (kWh)");
    b->add_option("--action", bl.action, "Battery action series CSV (kW)");
    b->add_option("--tariff", bl.tariff, "Tariff JSON (default PG&E E-TOU B)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g.threads > 0) omp_set_num_threads(g.threads);
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "synth") cmd_synth(g, synth);
        else if (name == "household") cmd_household(g, hh);
        else if (name == "cso") cmd_cso(g, cso);
        else if (name == "metrics") cmd_metrics(g, met);
        else if (name == "multiservice") cmd_multiservice(g, ms);
        else if (name == "run") cmd_run(g);
        else if (name == "validate") return cmd_validate(g);
        else if (name == "bill") cmd_bill(g, bl);
        return 0;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const io::json::exception& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return 3;
    }
}
