// Python bindings. Configs cross the boundary as config-file text or preset names.

#include "dsqos/config.hpp"
#include "dsqos/diffserv.hpp"
#include "dsqos/errors.hpp"
#include "dsqos/metrics.hpp"
#include "dsqos/scenario.hpp"
#include "dsqos/scheduler.hpp"
#include "dsqos/simulation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

namespace py = pybind11;
using namespace dsqos;

namespace {

using Settings = std::map<std::string, std::string>;

ScenarioConfig resolve(const std::string& source, const Settings& settings)
{
    ScenarioConfig cfg = source.find_first_of("=\n") == std::string::npos ? find_preset(source).config
                                                                           : parse_config(source);
    for (const auto& [k, v] : settings)
        apply_setting(cfg, k, v);
    cfg.validate();
    return cfg;
}

py::object optional_float(const std::optional<double>& v)
{
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::list rows_to_dicts(const std::vector<SweepPoint>& rows)
{
    py::list out;
    for (const auto& r : rows) {
        py::dict d;
        d["scenario_id"] = r.scenario_id;
        d["seed"] = r.seed;
        d["domains"] = r.domains;
        d["tb_bps"] = r.tb_bps;
        d["k_factor"] = r.k_factor;
        d["total_offered_bps"] = r.total_offered_bps;
        d["normalized_load"] = r.normalized_load;
        d["cls"] = std::string(to_string(r.cls));
        d["domain"] = r.domain;
        d["offered_pkts"] = r.offered_pkts;
        d["dropped_pkts"] = r.dropped_pkts;
        d["delivered_pkts"] = r.delivered_pkts;
        d["loss_pct"] = optional_float(r.loss_pct);
        d["mean_delay_ms"] = optional_float(r.mean_delay_ms);
        d["max_delay_ms"] = optional_float(r.max_delay_ms);
        out.append(d);
    }
    return out;
}

py::dict weights_dict(const WeightVector& w)
{
    py::dict d;
    for (auto c : kAllClasses)
        d[py::str(std::string(to_string(c)))] = w[c];
    return d;
}

py::dict plan_dict(const BufferPlan& p)
{
    py::dict d;
    d["total_slots"] = p.total_slots;
    d["AF"] = p.ql_af;
    d["EF"] = p.ql_ef;
    d["BE"] = p.ql_be;
    d["NC"] = p.ql_nc;
    return d;
}

PerClass<double> lengths_from(const std::map<std::string, double>& m)
{
    PerClass<double> out{};
    for (const auto& [name, v] : m) {
        bool found = false;
        for (auto c : kAllClasses)
            if (to_string(c) == name) {
                out[index(c)] = v;
                found = true;
            }
        if (!found)
            throw ConfigError("unknown traffic class '" + name + "'");
    }
    return out;
}

template <class F>
auto without_gil(F&& f)
{
    py::gil_scoped_release release;
    return f();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "DiffServ edge-router QoS simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InfeasiblePlanError>(m, "InfeasiblePlanError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

    m.def("preset_names", [] {
        std::vector<std::string> names;
        for (const auto& p : presets())
            names.push_back(p.name);
        return names;
    });
    m.def("preset_config", [](const std::string& name) { return serialize_config(find_preset(name).config); },
          py::arg("name"), "Config-file text of a preset.");
    m.def("normalize_config", [](const std::string& source, const Settings& settings) {
        return serialize_config(resolve(source, settings));
    }, py::arg("source"), py::arg("settings") = Settings{},
       "Parse config text (or a preset name), apply settings, validate and write every key back out.");

    m.def("run", [](const std::string& source, const Settings& settings, int jobs) {
        const auto cfg = resolve(source, settings);
        return rows_to_dicts(without_gil([&] { return run_config(cfg, {jobs}); }));
    }, py::arg("source"), py::arg("settings") = Settings{}, py::arg("jobs") = 1,
       "Run the config's sweep (or single point); one dict per class and domain.");
    m.def("run_csv", [](const std::string& source, const Settings& settings, int jobs) {
        const auto cfg = resolve(source, settings);
        return to_csv(without_gil([&] { return run_config(cfg, {jobs}); }));
    }, py::arg("source"), py::arg("settings") = Settings{}, py::arg("jobs") = 1);
    m.def("sweep_load", [](const std::string& source, const std::vector<double>& be_rates, const Settings& settings,
                           int jobs) {
        const auto cfg = resolve(source, settings);
        return rows_to_dicts(without_gil([&] { return sweep_load(cfg, be_rates, {jobs}); }));
    }, py::arg("source"), py::arg("be_rates"), py::arg("settings") = Settings{}, py::arg("jobs") = 1);
    m.def("sweep_k", [](const std::string& source, const std::vector<double>& k_values, const Settings& settings,
                        int jobs) {
        const auto cfg = resolve(source, settings);
        return rows_to_dicts(without_gil([&] { return sweep_k(cfg, k_values, {jobs}); }));
    }, py::arg("source"), py::arg("k_values"), py::arg("settings") = Settings{}, py::arg("jobs") = 1);

    m.def("simulate", [](const std::string& source, std::uint64_t seed, const Settings& settings) {
        const auto cfg = resolve(source, settings);
        const auto s = without_gil([&] { return simulate(cfg, seed); });
        py::dict out;
        py::list classes;
        for (int d = 0; d < s.ledger.domains(); ++d)
            for (auto c : kAllClasses) {
                const auto& st = s.ledger.at(c, d);
                py::dict row;
                row["cls"] = std::string(to_string(c));
                row["domain"] = d;
                row["offered"] = st.offered_packets;
                row["delivered"] = st.delivered_packets;
                row["dropped"] = st.dropped_packets;
                row["residual"] = st.residual_packets;
                row["loss_pct"] = optional_float(loss_percent(st));
                row["mean_delay_ms"] = optional_float(mean_delay_ms(st));
                classes.append(row);
            }
        out["classes"] = classes;
        out["plan"] = plan_dict(s.plan);
        py::list weights;
        for (const auto& w : s.final_weights)
            weights.append(weights_dict(w));
        out["final_weights"] = weights;
        out["events_processed"] = s.events_processed;
        out["conservation_checks"] = s.conservation_checks;
        out["conservation_violations"] = s.conservation_violations;
        out["shared_max_waiting"] = s.shared_max_waiting;
        out["shared_max_backlog_bytes"] = s.shared_max_backlog_bytes;
        return out;
    }, py::arg("source"), py::arg("seed") = 1, py::arg("settings") = Settings{},
       "One replication; per-class counters, buffer plan, final weights and run checks.");

    m.def("plan_buffers", [](double af_idr_bps, std::uint32_t af_pktsz, double af_dly_s, int af_sessions,
                             double ef_idr_bps, std::uint32_t ef_pktsz, double ef_dly_s, int ef_sessions,
                             std::uint32_t total_slots, std::uint32_t nc_reserve) {
        const auto af = ClassTrafficSpec::make(TrafficClass::AF, af_idr_bps, af_pktsz, af_dly_s, af_sessions);
        const auto ef = ClassTrafficSpec::make(TrafficClass::EF, ef_idr_bps, ef_pktsz, ef_dly_s, ef_sessions);
        return plan_dict(plan_buffers(af, ef, total_slots, nc_reserve));
    }, py::arg("af_idr_bps"), py::arg("af_pktsz"), py::arg("af_dly_s"), py::arg("af_sessions"),
       py::arg("ef_idr_bps"), py::arg("ef_pktsz"), py::arg("ef_dly_s"), py::arg("ef_sessions"),
       py::arg("total_slots"), py::arg("nc_reserve") = 1);

    m.def("adaptive_weights", [](const std::map<std::string, double>& lengths) {
        return weights_dict(adaptive_weights(lengths_from(lengths), default_priorities()));
    }, py::arg("lengths"), "Adaptive rule over per-class queue lengths, default priorities.");
    m.def("static_weights", [](double af_idr_bps, int af_sessions, double ef_idr_bps, int ef_sessions,
                               double be_rate_bps, double tb_bps, double k) {
        const auto af = ClassTrafficSpec::make(TrafficClass::AF, af_idr_bps, 1000, 0.1, af_sessions);
        const auto ef = ClassTrafficSpec::make(TrafficClass::EF, ef_idr_bps, 1000, 0.1, ef_sessions);
        return weights_dict(static_weights(af, ef, be_rate_bps, tb_bps, k));
    }, py::arg("af_idr_bps"), py::arg("af_sessions"), py::arg("ef_idr_bps"), py::arg("ef_sessions"),
       py::arg("be_rate_bps"), py::arg("tb_bps"), py::arg("k") = 1.0);
}
