#include "huffkit/types.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace huffkit {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool days_in_month_ok(std::int64_t y, unsigned m, unsigned d) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12 || d < 1) return false;
    unsigned len = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) len = 29;
    return d <= len;
}

bool parse_uint_field(std::string_view s, unsigned& out) {
    if (!all_digits(s)) return false;
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return false;
    out = v;
    return true;
}

}  // namespace

std::optional<Money> parse_money(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::string_view whole = text;
    std::string_view frac;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        whole = text.substr(0, dot);
        frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 2) return std::nullopt;
        if (!all_digits(frac)) return std::nullopt;
    }
    if (!all_digits(whole)) return std::nullopt;
    if (whole.size() > 15) return std::nullopt;  // keeps cents well inside int64

    std::int64_t units = 0;
    std::from_chars(whole.data(), whole.data() + whole.size(), units);
    std::int64_t cents = 0;
    if (!frac.empty()) {
        std::from_chars(frac.data(), frac.data() + frac.size(), cents);
        if (frac.size() == 1) cents *= 10;
    }
    std::int64_t total = units * 100 + cents;
    return negative ? -total : total;
}

std::string format_money(Money amount) {
    char buf[32];
    Money abs = amount < 0 ? -amount : amount;
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", amount < 0 ? "-" : "",
                  static_cast<long long>(abs / 100), static_cast<long long>(abs % 100));
    return buf;
}

double money_to_major(Money amount) { return static_cast<double>(amount) / 100.0; }

bool geo_point_valid(const GeoPoint& p) {
    return std::isfinite(p.latitude) && std::isfinite(p.longitude) &&
           p.latitude >= -90.0 && p.latitude <= 90.0 && p.longitude >= -180.0 &&
           p.longitude <= 180.0;
}

std::optional<std::int64_t> parse_timestamp(std::string_view text) {
    if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
    if (text.size() != 10 && text.size() != 19) return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;

    unsigned y = 0, mo = 0, d = 0;
    if (!parse_uint_field(text.substr(0, 4), y)) return std::nullopt;
    if (!parse_uint_field(text.substr(5, 2), mo)) return std::nullopt;
    if (!parse_uint_field(text.substr(8, 2), d)) return std::nullopt;
    if (!days_in_month_ok(y, mo, d)) return std::nullopt;

    unsigned hh = 0, mi = 0, ss = 0;
    if (text.size() == 19) {
        if ((text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':')
            return std::nullopt;
        if (!parse_uint_field(text.substr(11, 2), hh)) return std::nullopt;
        if (!parse_uint_field(text.substr(14, 2), mi)) return std::nullopt;
        if (!parse_uint_field(text.substr(17, 2), ss)) return std::nullopt;
        if (hh > 23 || mi > 59 || ss > 59) return std::nullopt;
    }
    return days_from_civil(y, mo, d) * 86400 + hh * 3600 + mi * 60 + ss;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

void Dataset::rebuild_indexes() {
    customer_index.clear();
    merchant_index.clear();
    customer_index.reserve(customers.size());
    merchant_index.reserve(merchants.size());
    for (std::size_t i = 0; i < customers.size(); ++i)
        customer_index.emplace(customers[i].customer_id, i);
    for (std::size_t i = 0; i < merchants.size(); ++i)
        merchant_index.emplace(merchants[i].merchant_id, i);
}

bool natural_less(std::string_view a, std::string_view b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const unsigned char ca = a[i], cb = b[j];
        const bool da = std::isdigit(ca), db = std::isdigit(cb);
        if (da && db) {
            std::size_t ia = i, jb = j;
            while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
            while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
            std::string_view na = a.substr(i, ia - i), nb = b.substr(j, jb - j);
            std::string_view ta = na.substr(na.find_first_not_of('0') == std::string_view::npos
                                                ? na.size() - 1
                                                : na.find_first_not_of('0'));
            std::string_view tb = nb.substr(nb.find_first_not_of('0') == std::string_view::npos
                                                ? nb.size() - 1
                                                : nb.find_first_not_of('0'));
            if (ta.size() != tb.size()) return ta.size() < tb.size();
            if (ta != tb) return ta < tb;
            i = ia;
            j = jb;
        } else {
            if (ca != cb) return ca < cb;
            ++i;
            ++j;
        }
    }
    return a.size() - i < b.size() - j || (a.size() - i == b.size() - j && a < b);
}

}  // namespace huffkit
