#include "alphax/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "alphax/csv.hpp"
#include "alphax/errors.hpp"

namespace alphax {

bool valid_asset_id(const AssetId& id) {
    if (id.empty()) return false;
    std::size_t i = 0;
    while (i < id.size() && id[i] >= 'A' && id[i] <= 'Z') ++i;
    if (i == 0 || i == id.size()) return false;
    while (i < id.size() && id[i] >= '0' && id[i] <= '9') ++i;
    return i == id.size();
}

std::string bar_violation(const DailyBar& bar) {
    auto where = [&] { return bar.asset + " " + bar.date.to_string() + ": "; };
    if (!(bar.open > 0 && bar.high > 0 && bar.low > 0 && bar.close > 0))
        return where() + "non-positive price";
    if (!(std::isfinite(bar.open) && std::isfinite(bar.high) && std::isfinite(bar.low) &&
          std::isfinite(bar.close)))
        return where() + "non-finite price";
    if (bar.low > bar.high) return where() + "low > high";
    if (bar.open < bar.low || bar.open > bar.high) return where() + "open outside [low, high]";
    if (bar.close < bar.low || bar.close > bar.high) return where() + "close outside [low, high]";
    if (bar.volume < 0) return where() + "negative volume";
    return {};
}

std::string statement_violation(const StatementRecord& rec) {
    auto where = [&] { return rec.company + " " + rec.fiscal_quarter.label() + ": "; };
    if (!rec.fiscal_quarter.valid()) return where() + "quarter outside 1-4";
    if (!(rec.shares_outstanding > 0)) return where() + "shares_outstanding must be positive";
    for (double v : {rec.revenue, rec.operating_expenses, rec.gross_profit, rec.ebit,
                     rec.net_income, rec.total_assets, rec.total_liabilities, rec.equity,
                     rec.operating_cash_flow}) {
        if (!std::isfinite(v)) return where() + "non-finite statement value";
    }
    if (rec.release_date <= rec.fiscal_quarter.end_date())
        return where() + "release_date not after fiscal quarter end";
    return {};
}

Date ReleaseCalendar::release_date(FiscalQuarter q) {
    switch (q.quarter) {
        case 1: return Date::from_ymd(q.year, 5, 31);
        case 2: return Date::from_ymd(q.year, 8, 31);
        case 3: return Date::from_ymd(q.year, 11, 30);
        case 4: return Date::from_ymd(q.year + 1, 2, 28);  // Feb 28 even in leap years
        default: throw ConfigError("invalid fiscal quarter " + std::to_string(q.quarter));
    }
}

std::optional<double> RiskFreeSeries::rate_at(Date t) const {
    auto it = std::upper_bound(entries.begin(), entries.end(), t,
                               [](Date d, const auto& e) { return d < e.first; });
    if (it == entries.begin()) return std::nullopt;
    return std::prev(it)->second;
}

const IndexWeights* IndexWeightsSeries::at_or_before(Date t) const {
    auto it = std::upper_bound(snapshots.begin(), snapshots.end(), t,
                               [](Date d, const IndexWeights& w) { return d < w.as_of; });
    if (it == snapshots.begin()) return nullptr;
    return &*std::prev(it);
}

void MarketData::add_bars(std::vector<DailyBar> bars) {
    for (const auto& bar : bars) {
        if (!valid_asset_id(bar.asset))
            throw ValidationError("invalid ticker '" + bar.asset + "'");
        if (auto v = bar_violation(bar); !v.empty()) throw ValidationError(v);
    }
    for (auto& bar : bars) {
        bars_[bar.asset].push_back(bar);
    }
    for (auto& [asset, series] : bars_) {
        std::sort(series.begin(), series.end(),
                  [](const DailyBar& a, const DailyBar& b) { return a.date < b.date; });
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (series[i].date == series[i - 1].date)
                throw ValidationError("duplicate bar for " + asset + " on " +
                                      series[i].date.to_string());
        }
    }
    std::set<Date> dates;
    for (const auto& [asset, series] : bars_)
        for (const auto& bar : series) dates.insert(bar.date);
    all_dates_.assign(dates.begin(), dates.end());
}

void MarketData::add_statements(std::vector<StatementRecord> recs) {
    for (const auto& rec : recs) {
        if (!valid_asset_id(rec.company))
            throw ValidationError("invalid ticker '" + rec.company + "'");
        if (auto v = statement_violation(rec); !v.empty()) throw ValidationError(v);
    }
    for (auto& rec : recs) statements_[rec.company].push_back(rec);
    for (auto& [company, series] : statements_) {
        std::sort(series.begin(), series.end(), [](const StatementRecord& a, const StatementRecord& b) {
            if (a.release_date != b.release_date) return a.release_date < b.release_date;
            return a.fiscal_quarter < b.fiscal_quarter;
        });
        for (std::size_t i = 1; i < series.size(); ++i) {
            if (series[i].fiscal_quarter == series[i - 1].fiscal_quarter)
                throw ValidationError("duplicate statement for " + company + " " +
                                      series[i].fiscal_quarter.label());
        }
    }
}

void MarketData::set_risk_free(RiskFreeSeries series) {
    for (std::size_t i = 0; i < series.entries.size(); ++i) {
        const auto& [date, rate] = series.entries[i];
        if (rate < 0 || !std::isfinite(rate))
            throw ValidationError("risk-free rate on " + date.to_string() + " must be >= 0");
        if (i > 0 && !(series.entries[i - 1].first < date))
            throw ValidationError("risk-free dates must be strictly increasing at " +
                                  date.to_string());
    }
    risk_free_ = std::move(series);
}

void MarketData::set_index_weights(IndexWeightsSeries series) {
    std::sort(series.snapshots.begin(), series.snapshots.end(),
              [](const IndexWeights& a, const IndexWeights& b) { return a.as_of < b.as_of; });
    for (auto& snap : series.snapshots) {
        double total = 0;
        for (const auto& [asset, w] : snap.weights) {
            if (w < 0 || !std::isfinite(w))
                throw ValidationError("negative index weight for " + asset + " at " +
                                      snap.as_of.to_string());
            total += w;
        }
        if (total <= 0)
            throw ValidationError("index weights at " + snap.as_of.to_string() + " sum to zero");
        for (auto& [asset, w] : snap.weights) w /= total;
    }
    index_weights_ = std::move(series);
}

void MarketData::set_universe(std::vector<AssetId> tickers) {
    std::sort(tickers.begin(), tickers.end());
    tickers.erase(std::unique(tickers.begin(), tickers.end()), tickers.end());
    for (const auto& t : tickers)
        if (!valid_asset_id(t)) throw ValidationError("invalid ticker '" + t + "' in universe");
    universe_ = std::move(tickers);
}

std::vector<AssetId> MarketData::bar_assets() const {
    std::vector<AssetId> out;
    out.reserve(bars_.size());
    for (const auto& [asset, series] : bars_) out.push_back(asset);
    return out;
}

const std::vector<DailyBar>* MarketData::bars_for(const AssetId& asset) const {
    auto it = bars_.find(asset);
    return it == bars_.end() ? nullptr : &it->second;
}

const DailyBar* MarketData::bar_at_or_before(const AssetId& asset, Date t) const {
    const auto* series = bars_for(asset);
    if (!series) return nullptr;
    auto it = std::upper_bound(series->begin(), series->end(), t,
                               [](Date d, const DailyBar& b) { return d < b.date; });
    if (it == series->begin()) return nullptr;
    return &*std::prev(it);
}

const DailyBar* MarketData::bar_on(const AssetId& asset, Date t) const {
    const DailyBar* bar = bar_at_or_before(asset, t);
    return (bar && bar->date == t) ? bar : nullptr;
}

const StatementRecord* MarketData::statement_as_of(const AssetId& company, Date t) const {
    auto it = statements_.find(company);
    if (it == statements_.end()) return nullptr;
    const auto& series = it->second;
    auto pos = std::upper_bound(series.begin(), series.end(), t,
                                [](Date d, const StatementRecord& r) { return d < r.release_date; });
    if (pos == series.begin()) return nullptr;
    return &*std::prev(pos);
}

std::vector<const StatementRecord*> MarketData::statements_as_of(const AssetId& company,
                                                                 Date t) const {
    std::vector<const StatementRecord*> out;
    auto it = statements_.find(company);
    if (it == statements_.end()) return out;
    for (const auto& rec : it->second) {
        if (rec.release_date <= t) out.push_back(&rec);
    }
    std::sort(out.begin(), out.end(), [](const StatementRecord* a, const StatementRecord* b) {
        return a->fiscal_quarter < b->fiscal_quarter;
    });
    return out;
}

const std::vector<StatementRecord>* MarketData::statements_for(const AssetId& company) const {
    auto it = statements_.find(company);
    return it == statements_.end() ? nullptr : &it->second;
}

std::vector<Date> MarketData::trading_days(Date from, Date to) const {
    auto lo = std::lower_bound(all_dates_.begin(), all_dates_.end(), from);
    auto hi = std::upper_bound(all_dates_.begin(), all_dates_.end(), to);
    return {lo, hi};
}

std::optional<Date> MarketData::next_trading_day(Date t) const {
    auto it = std::lower_bound(all_dates_.begin(), all_dates_.end(), t);
    if (it == all_dates_.end()) return std::nullopt;
    return *it;
}

Date MarketData::first_bar_date() const {
    return all_dates_.empty() ? Date() : all_dates_.front();
}

Date MarketData::last_bar_date() const {
    return all_dates_.empty() ? Date() : all_dates_.back();
}

// ---------------------------------------------------------------------------
// Loaders
// ---------------------------------------------------------------------------

namespace {

double parse_double(const std::string& s, const std::string& file, std::size_t line,
                    const char* what) {
    double v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(file, line, std::string("bad ") + what + " '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& file, std::size_t line,
                       const char* what) {
    std::int64_t v;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(file, line, std::string("bad ") + what + " '" + s + "'");
    return v;
}

Date parse_date(const std::string& s, const std::string& file, std::size_t line,
                const char* what) {
    auto d = Date::parse(s);
    if (!d) throw ParseError(file, line, std::string("bad ") + what + " '" + s + "'");
    return *d;
}

void expect_header(const std::vector<std::string>& fields, const std::vector<std::string>& want,
                   const std::string& file, std::size_t n_optional = 0) {
    if (fields.size() < want.size() - n_optional || fields.size() > want.size())
        throw ParseError(file, 1, "expected header with " + std::to_string(want.size()) +
                                      " columns, got " + std::to_string(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        std::string got = fields[i];
        std::transform(got.begin(), got.end(), got.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (got != want[i])
            throw ParseError(file, 1, "expected column '" + want[i] + "', got '" + fields[i] + "'");
    }
}

}  // namespace

std::vector<DailyBar> load_bars(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> f;
    if (!reader.next(f)) throw ParseError(reader.path(), 0, "empty file");
    expect_header(f, {"ticker", "date", "open", "high", "low", "close", "volume"}, reader.path());

    std::vector<DailyBar> out;
    while (reader.next(f)) {
        if (f.size() != 7)
            throw ParseError(reader.path(), reader.line(),
                             "expected 7 fields, got " + std::to_string(f.size()));
        DailyBar bar;
        bar.asset = f[0];
        bar.date = parse_date(f[1], reader.path(), reader.line(), "date");
        bar.open = parse_double(f[2], reader.path(), reader.line(), "open");
        bar.high = parse_double(f[3], reader.path(), reader.line(), "high");
        bar.low = parse_double(f[4], reader.path(), reader.line(), "low");
        bar.close = parse_double(f[5], reader.path(), reader.line(), "close");
        bar.volume = parse_int(f[6], reader.path(), reader.line(), "volume");
        if (!valid_asset_id(bar.asset))
            throw ParseError(reader.path(), reader.line(), "invalid ticker '" + bar.asset + "'");
        if (auto v = bar_violation(bar); !v.empty())
            throw ValidationError(reader.path() + ":" + std::to_string(reader.line()) + ": " + v);
        out.push_back(bar);
    }
    return out;
}

std::vector<StatementRecord> load_statements(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> f;
    if (!reader.next(f)) throw ParseError(reader.path(), 0, "empty file");
    expect_header(f,
                  {"ticker", "year", "quarter", "revenue", "opex", "gross_profit", "ebit",
                   "net_income", "assets", "liabilities", "equity", "op_cash_flow", "shares_out",
                   "release_date"},
                  reader.path(), /*n_optional=*/1);
    const bool has_release = f.size() == 14;

    std::vector<StatementRecord> out;
    while (reader.next(f)) {
        const std::size_t want = has_release ? 14 : 13;
        if (f.size() != want)
            throw ParseError(reader.path(), reader.line(),
                             "expected " + std::to_string(want) + " fields, got " +
                                 std::to_string(f.size()));
        StatementRecord rec;
        rec.company = f[0];
        rec.fiscal_quarter.year =
            static_cast<int>(parse_int(f[1], reader.path(), reader.line(), "year"));
        rec.fiscal_quarter.quarter =
            static_cast<int>(parse_int(f[2], reader.path(), reader.line(), "quarter"));
        if (!rec.fiscal_quarter.valid())
            throw ValidationError(reader.path() + ":" + std::to_string(reader.line()) +
                                  ": quarter outside 1-4");
        rec.revenue = parse_double(f[3], reader.path(), reader.line(), "revenue");
        rec.operating_expenses = parse_double(f[4], reader.path(), reader.line(), "opex");
        rec.gross_profit = parse_double(f[5], reader.path(), reader.line(), "gross_profit");
        rec.ebit = parse_double(f[6], reader.path(), reader.line(), "ebit");
        rec.net_income = parse_double(f[7], reader.path(), reader.line(), "net_income");
        rec.total_assets = parse_double(f[8], reader.path(), reader.line(), "assets");
        rec.total_liabilities = parse_double(f[9], reader.path(), reader.line(), "liabilities");
        rec.equity = parse_double(f[10], reader.path(), reader.line(), "equity");
        rec.operating_cash_flow = parse_double(f[11], reader.path(), reader.line(), "op_cash_flow");
        rec.shares_outstanding = parse_double(f[12], reader.path(), reader.line(), "shares_out");
        if (has_release) {
            rec.release_date = parse_date(f[13], reader.path(), reader.line(), "release_date");
        } else {
            rec.release_date = ReleaseCalendar::release_date(rec.fiscal_quarter);
        }
        if (auto v = statement_violation(rec); !v.empty())
            throw ValidationError(reader.path() + ":" + std::to_string(reader.line()) + ": " + v);
        out.push_back(rec);
    }
    return out;
}

RiskFreeSeries load_risk_free(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> f;
    if (!reader.next(f)) throw ParseError(reader.path(), 0, "empty file");
    expect_header(f, {"date", "annual_rate"}, reader.path());

    RiskFreeSeries out;
    while (reader.next(f)) {
        if (f.size() != 2)
            throw ParseError(reader.path(), reader.line(),
                             "expected 2 fields, got " + std::to_string(f.size()));
        Date d = parse_date(f[0], reader.path(), reader.line(), "date");
        double rate = parse_double(f[1], reader.path(), reader.line(), "annual_rate");
        out.entries.emplace_back(d, rate);
    }
    return out;
}

IndexWeightsSeries load_index_weights(const std::filesystem::path& path) {
    csv::Reader reader(path);
    std::vector<std::string> f;
    if (!reader.next(f)) throw ParseError(reader.path(), 0, "empty file");
    expect_header(f, {"as_of", "ticker", "weight"}, reader.path());

    std::map<Date, IndexWeights> by_date;
    while (reader.next(f)) {
        if (f.size() != 3)
            throw ParseError(reader.path(), reader.line(),
                             "expected 3 fields, got " + std::to_string(f.size()));
        Date d = parse_date(f[0], reader.path(), reader.line(), "as_of");
        double w = parse_double(f[2], reader.path(), reader.line(), "weight");
        auto& snap = by_date[d];
        snap.as_of = d;
        if (!snap.weights.emplace(f[1], w).second)
            throw ParseError(reader.path(), reader.line(),
                             "duplicate weight for " + f[1] + " at " + d.to_string());
    }
    IndexWeightsSeries out;
    for (auto& [date, snap] : by_date) out.snapshots.push_back(std::move(snap));
    return out;
}

std::vector<AssetId> load_universe(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::vector<AssetId> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        while (!line.empty() && line.back() == ' ') line.pop_back();
        while (!line.empty() && line.front() == ' ') line.erase(line.begin());
        if (line.empty() || line[0] == '#') continue;
        if (!valid_asset_id(line))
            throw ParseError(path.string(), n, "invalid ticker '" + line + "'");
        out.push_back(line);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serializers
// ---------------------------------------------------------------------------

std::string serialize_bars(const std::vector<DailyBar>& bars) {
    std::string out = "ticker,date,open,high,low,close,volume\n";
    for (const auto& b : bars) {
        out += b.asset + "," + b.date.to_string() + "," + csv::format_double(b.open) + "," +
               csv::format_double(b.high) + "," + csv::format_double(b.low) + "," +
               csv::format_double(b.close) + "," + std::to_string(b.volume) + "\n";
    }
    return out;
}

std::string serialize_statements(const std::vector<StatementRecord>& recs, bool explicit_release) {
    std::string out =
        "ticker,year,quarter,revenue,opex,gross_profit,ebit,net_income,assets,"
        "liabilities,equity,op_cash_flow,shares_out";
    if (explicit_release) out += ",release_date";
    out += "\n";
    for (const auto& r : recs) {
        out += r.company + "," + std::to_string(r.fiscal_quarter.year) + "," +
               std::to_string(r.fiscal_quarter.quarter) + "," + csv::format_double(r.revenue) +
               "," + csv::format_double(r.operating_expenses) + "," +
               csv::format_double(r.gross_profit) + "," + csv::format_double(r.ebit) + "," +
               csv::format_double(r.net_income) + "," + csv::format_double(r.total_assets) + "," +
               csv::format_double(r.total_liabilities) + "," + csv::format_double(r.equity) + "," +
               csv::format_double(r.operating_cash_flow) + "," +
               csv::format_double(r.shares_outstanding);
        if (explicit_release) out += "," + r.release_date.to_string();
        out += "\n";
    }
    return out;
}

std::string serialize_risk_free(const RiskFreeSeries& series) {
    std::string out = "date,annual_rate\n";
    for (const auto& [date, rate] : series.entries)
        out += date.to_string() + "," + csv::format_double(rate) + "\n";
    return out;
}

std::string serialize_index_weights(const IndexWeightsSeries& series) {
    std::string out = "as_of,ticker,weight\n";
    for (const auto& snap : series.snapshots)
        for (const auto& [asset, w] : snap.weights)
            out += snap.as_of.to_string() + "," + asset + "," + csv::format_double(w) + "\n";
    return out;
}

std::string serialize_universe(const std::vector<AssetId>& tickers) {
    std::string out;
    for (const auto& t : tickers) out += t + "\n";
    return out;
}

}  // namespace alphax
