#include "extfair/rational.hpp"

#include "extfair/error.hpp"

#include <cctype>

namespace extfair {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::ParseError: return "ParseError";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::UnnormalizedWeights: return "UnnormalizedWeights";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::GeneralFormUnsupported: return "GeneralFormUnsupported";
    case Errc::NotABijection: return "NotABijection";
    case Errc::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case Errc::SearchCapExceeded: return "SearchCapExceeded";
    case Errc::BadEpsilon: return "BadEpsilon";
    case Errc::BadParameters: return "BadParameters";
    case Errc::WrongAgentCount: return "WrongAgentCount";
    case Errc::BadConfig: return "BadConfig";
    case Errc::InvariantBroken: return "InvariantBroken";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Error";
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rat parse_rational(std::string_view s) {
    std::string_view orig = s;
    if (s.empty()) fail(Errc::ParseError, "empty rational literal");

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) fail(Errc::ParseError, "bare sign in rational literal '" + std::string(orig) + "'");

    auto bad = [&]() -> Rat {
        fail(Errc::ParseError, "cannot parse rational literal '" + std::string(orig) + "'");
    };

    Rat out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return bad();
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) fail(Errc::ParseError, "zero denominator in '" + std::string(orig) + "'");
        out = Rat(n, d);
        out.canonicalize();
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot);
        std::string_view fp = s.substr(dot + 1);
        if (ip.empty() && fp.empty()) return bad();
        if (!ip.empty() && !all_digits(ip)) return bad();
        if (!fp.empty() && !all_digits(fp)) return bad();
        std::string digits = std::string(ip) + std::string(fp);
        mpz_class n(digits.empty() ? "0" : digits, 10);
        mpz_class d = 1;
        for (size_t i = 0; i < fp.size(); ++i) d *= 10;
        out = Rat(n, d);
        out.canonicalize();
    } else {
        if (!all_digits(s)) return bad();
        out = Rat(mpz_class(std::string(s), 10));
    }
    if (neg) out = -out;
    return out;
}

std::string rat_to_string(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double rat_to_double(const Rat& r) { return r.get_d(); }

Rat rat_frac(long p, long q) {
    if (q == 0) fail(Errc::InvalidArgument, "zero denominator");
    Rat r(p, q);
    r.canonicalize();
    return r;
}

Rat vec_sum(const std::vector<Rat>& v) {
    Rat s = 0;
    for (const Rat& x : v) s += x;
    return s;
}

} // namespace extfair
