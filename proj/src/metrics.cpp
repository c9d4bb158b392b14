#include "dsqos/metrics.hpp"

#include "dsqos/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dsqos {

void ClassStats::merge(const ClassStats& o)
{
    offered_packets += o.offered_packets;
    offered_bytes += o.offered_bytes;
    dropped_packets += o.dropped_packets;
    delivered_packets += o.delivered_packets;
    residual_packets += o.residual_packets;
    delay_sum_us += o.delay_sum_us;
    delay_max_us = std::max(delay_max_us, o.delay_max_us);
}

MetricsLedger::MetricsLedger(int domains) : stats_(static_cast<std::size_t>(std::max(domains, 1))) {}

ClassStats MetricsLedger::total(TrafficClass c) const
{
    ClassStats sum;
    for (const auto& d : stats_)
        sum.merge(d[index(c)]);
    return sum;
}

void MetricsLedger::record_offered(const Packet& p)
{
    auto& s = at(p.cls, p.domain);
    ++s.offered_packets;
    s.offered_bytes += p.size;
}

void MetricsLedger::record_drop(const Packet& p)
{
    ++at(p.cls, p.domain).dropped_packets;
}

void MetricsLedger::record_delivery(const Packet& p)
{
    auto& s = at(p.cls, p.domain);
    const std::int64_t delay = (p.delivered_at.value() - p.created_at).us();
    ++s.delivered_packets;
    s.delay_sum_us += static_cast<std::uint64_t>(delay);
    s.delay_max_us = std::max(s.delay_max_us, delay);
}

void MetricsLedger::merge(const MetricsLedger& other)
{
    if (other.domains() != domains())
        throw ContractViolation("cannot merge ledgers with different domain counts");
    for (std::size_t d = 0; d < stats_.size(); ++d)
        for (auto c : kAllClasses)
            stats_[d][index(c)].merge(other.stats_[d][index(c)]);
}

std::optional<double> loss_percent(const ClassStats& s)
{
    if (s.offered_packets == 0)
        return std::nullopt;
    const auto lost = s.offered_packets - s.delivered_packets - s.residual_packets;
    return 100.0 * static_cast<double>(lost) / static_cast<double>(s.offered_packets);
}

std::optional<double> loss_percent(const MetricsLedger& ledger, TrafficClass c, int domain)
{
    return loss_percent(ledger.at(c, domain));
}

std::optional<double> mean_delay_ms(const ClassStats& s)
{
    if (s.delivered_packets == 0)
        return std::nullopt;
    return static_cast<double>(s.delay_sum_us) / static_cast<double>(s.delivered_packets) / 1000.0;
}

std::optional<double> mean_delay_ms(const MetricsLedger& ledger, TrafficClass c, int domain)
{
    return mean_delay_ms(ledger.at(c, domain));
}

std::optional<double> max_delay_ms(const ClassStats& s)
{
    if (s.delivered_packets == 0)
        return std::nullopt;
    return static_cast<double>(s.delay_max_us) / 1000.0;
}

double normalized_load(double offered_bps, double tb_bps)
{
    if (!(tb_bps > 0))
        throw ConfigError("normalized load needs a positive link bandwidth");
    return offered_bps / tb_bps;
}

namespace {

std::string fmt6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v)
{
    return v ? fmt6(*v) : std::string{};
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            return out;
        start = pos + 1;
    }
}

double parse_real(std::string_view v, std::string_view column)
{
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw IoError("csv column " + std::string(column) + ": bad number '" + std::string(v) + "'");
    return out;
}

template <typename Int>
Int parse_int(std::string_view v, std::string_view column)
{
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw IoError("csv column " + std::string(column) + ": bad integer '" + std::string(v) + "'");
    return out;
}

std::optional<double> parse_opt(std::string_view v, std::string_view column)
{
    if (v.empty())
        return std::nullopt;
    return parse_real(v, column);
}

} // namespace

double round_sig6(double v)
{
    return parse_real(fmt6(v), "value");
}

void sort_points(std::vector<SweepPoint>& points)
{
    std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        if (a.total_offered_bps != b.total_offered_bps)
            return a.total_offered_bps < b.total_offered_bps;
        if (a.k_factor != b.k_factor)
            return a.k_factor < b.k_factor;
        if (a.cls != b.cls)
            return a.cls < b.cls;
        return a.domain < b.domain;
    });
}

std::string csv_header()
{
    return "scenario_id,seed,domains,tb_bps,k_factor,total_offered_bps,normalized_load,class,domain,"
           "offered_pkts,dropped_pkts,delivered_pkts,loss_pct,mean_delay_ms,max_delay_ms";
}

std::string to_csv(const std::vector<SweepPoint>& points)
{
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& p : points) {
        out << p.scenario_id << ',' << p.seed << ',' << p.domains << ',' << fmt6(p.tb_bps) << ','
            << fmt6(p.k_factor) << ',' << fmt6(p.total_offered_bps) << ',' << fmt6(p.normalized_load) << ','
            << to_string(p.cls) << ',' << p.domain << ',' << p.offered_pkts << ',' << p.dropped_pkts << ','
            << p.delivered_pkts << ',' << fmt_opt(p.loss_pct) << ',' << fmt_opt(p.mean_delay_ms) << ','
            << fmt_opt(p.max_delay_ms) << '\n';
    }
    return out.str();
}

std::vector<SweepPoint> parse_csv(std::string_view text)
{
    std::vector<SweepPoint> points;
    bool header = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (header) {
            if (line != csv_header())
                throw IoError("csv header does not match the expected columns");
            header = false;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 15)
            throw IoError("csv row has " + std::to_string(f.size()) + " fields, expected 15");
        SweepPoint p;
        p.scenario_id = std::string(f[0]);
        p.seed = parse_int<std::uint64_t>(f[1], "seed");
        p.domains = parse_int<int>(f[2], "domains");
        p.tb_bps = parse_real(f[3], "tb_bps");
        p.k_factor = parse_real(f[4], "k_factor");
        p.total_offered_bps = parse_real(f[5], "total_offered_bps");
        p.normalized_load = parse_real(f[6], "normalized_load");
        auto cls = parse_traffic_class(f[7]);
        if (!cls)
            throw IoError("csv column class: unknown class '" + std::string(f[7]) + "'");
        p.cls = *cls;
        p.domain = parse_int<int>(f[8], "domain");
        p.offered_pkts = parse_int<std::uint64_t>(f[9], "offered_pkts");
        p.dropped_pkts = parse_int<std::uint64_t>(f[10], "dropped_pkts");
        p.delivered_pkts = parse_int<std::uint64_t>(f[11], "delivered_pkts");
        p.loss_pct = parse_opt(f[12], "loss_pct");
        p.mean_delay_ms = parse_opt(f[13], "mean_delay_ms");
        p.max_delay_ms = parse_opt(f[14], "max_delay_ms");
        points.push_back(std::move(p));
    }
    return points;
}

void export_csv(const std::vector<SweepPoint>& points, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << to_csv(points);
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

std::vector<SweepPoint> import_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

} // namespace dsqos
