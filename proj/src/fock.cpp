#include "qfree/fock.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <stdexcept>

#include <boost/container_hash/hash.hpp>

namespace qfree {

int BasisMonomial::degree() const {
    return std::accumulate(a.begin(), a.end(), 0) + std::accumulate(b.begin(), b.end(), 0);
}

std::string half_str(int twice) {
    if (twice % 2 == 0) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

std::string BasisMonomial::str() const {
    std::string out;
    for (int k : a) out += "a[-" + std::to_string(k) + "]";
    for (int k : b) out += "b[-" + std::to_string(k) + "]";
    out += "|" + half_str(l1x2) + "," + std::to_string(l2) + ">";
    return out;
}

namespace {

int parse_int(const std::string& s, std::size_t& pos) {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start])))) {
        throw std::invalid_argument("expected integer in monomial '" + s + "'");
    }
    return std::stoi(s.substr(start, pos - start));
}

void expect(const std::string& s, std::size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) {
        throw std::invalid_argument(std::string("expected '") + c + "' in monomial '" + s + "'");
    }
    ++pos;
}

}  // namespace

BasisMonomial BasisMonomial::parse(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    BasisMonomial m;
    std::size_t pos = 0;
    while (pos < s.size() && (s[pos] == 'a' || s[pos] == 'b')) {
        const char fam = s[pos++];
        expect(s, pos, '[');
        const int n = parse_int(s, pos);
        expect(s, pos, ']');
        if (n >= 0 || n < -255) throw std::invalid_argument("creation index out of range in '" + text + "'");
        insert_part(fam == 'a' ? m.a : m.b, -n);
    }
    expect(s, pos, '|');
    const int num = parse_int(s, pos);
    int l1x2 = 2 * num;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        if (parse_int(s, pos) != 2 || num % 2 == 0) {
            throw std::invalid_argument("l1 must be a half-integer in '" + text + "'");
        }
        l1x2 = num;
    }
    expect(s, pos, ',');
    const int l2 = parse_int(s, pos);
    expect(s, pos, '>');
    if (pos != s.size()) throw std::invalid_argument("trailing input in monomial '" + text + "'");
    m.l1x2 = l1x2;
    m.l2 = l2;
    return m;
}

std::strong_ordering operator<=>(const BasisMonomial& x, const BasisMonomial& y) {
    if (auto c = x.l1x2 <=> y.l1x2; c != 0) return c;
    if (auto c = x.l2 <=> y.l2; c != 0) return c;
    if (auto c = x.degree() <=> y.degree(); c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(x.a.begin(), x.a.end(), y.a.begin(), y.a.end()); c != 0) {
        return c;
    }
    return std::lexicographical_compare_three_way(x.b.begin(), x.b.end(), y.b.begin(), y.b.end());
}

std::size_t BasisMonomial::hash() const {
    std::size_t h = 0;
    boost::hash_combine(h, l1x2);
    boost::hash_combine(h, l2);
    boost::hash_range(h, a.begin(), a.end());
    boost::hash_combine(h, 0xffu);
    boost::hash_range(h, b.begin(), b.end());
    return h;
}

void insert_part(Parts& parts, int k) {
    if (k < 1 || k > 255) throw std::out_of_range("oscillator index out of range");
    auto it = std::find_if(parts.begin(), parts.end(), [k](std::uint8_t p) { return p <= k; });
    parts.insert(it, static_cast<std::uint8_t>(k));
}

// ---------------------------------------------------------------------------

FockVector::FockVector(const BasisMonomial& m, UScalar c) {
    if (!c.is_zero()) terms_.emplace(m, std::move(c));
}

UScalar FockVector::coeff(const BasisMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? UScalar() : it->second;
}

std::vector<std::pair<BasisMonomial, UScalar>> FockVector::sorted() const {
    std::vector<std::pair<BasisMonomial, UScalar>> out(terms_.begin(), terms_.end());
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

bool FockVector::single_sector() const {
    if (terms_.empty()) return true;
    const auto& first = terms_.begin()->first;
    return std::all_of(terms_.begin(), terms_.end(), [&](const auto& t) {
        return t.first.l1x2 == first.l1x2 && t.first.l2 == first.l2;
    });
}

int FockVector::max_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

void FockVector::add(const BasisMonomial& m, const UScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void FockVector::add_scaled(const FockVector& v, const UScalar& c) {
    if (c.is_zero()) return;
    if (c.is_one()) {
        *this += v;
        return;
    }
    for (const auto& [m, x] : v.terms_) add(m, x * c);
}

FockVector& FockVector::operator+=(const FockVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

FockVector& FockVector::operator-=(const FockVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

FockVector& FockVector::operator*=(const UScalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, x] : terms_) x *= c;
    return *this;
}

std::string FockVector::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : sorted()) {
        if (!out.empty()) out += " + ";
        if (!c.is_one()) out += "(" + c.str() + ")*";
        out += m.str();
    }
    return out;
}

std::string Weight::str() const {
    return lambda0.get_str() + "*L0 + " + lambda1.get_str() + "*L1 + " + delta.get_str() + "*delta";
}

// ---------------------------------------------------------------------------

namespace {

// Partitions of n, each in descending order, listed in reverse lexicographic order.
const std::vector<Parts>& partitions(int n) {
    static std::mutex mutex;
    static std::map<int, std::vector<Parts>> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    std::vector<Parts> out;
    Parts cur;
    std::function<void(int, int)> rec = [&](int rest, int max_part) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(rest, max_part); k >= 1; --k) {
            cur.push_back(static_cast<std::uint8_t>(k));
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace

const std::vector<BasisMonomial>& enumerate_basis(int l1x2, int l2, int degree) {
    if (degree < 0) throw std::invalid_argument("degree must be nonnegative");
    static std::mutex mutex;
    static std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<BasisMonomial>>> cache;
    const auto key = std::make_tuple(l1x2, l2, degree);
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return *it->second;
    }
    auto basis = std::make_unique<std::vector<BasisMonomial>>();
    for (int da = degree; da >= 0; --da) {
        const auto& pa = partitions(da);
        const auto& pb = partitions(degree - da);
        for (const auto& x : pa) {
            for (const auto& y : pb) {
                BasisMonomial m(l1x2, l2);
                m.a = x;
                m.b = y;
                basis->push_back(std::move(m));
            }
        }
    }
    std::lock_guard lock(mutex);
    auto [it, inserted] = cache.emplace(key, std::move(basis));
    return *it->second;
}

std::size_t two_colored_partitions(int n) {
    if (n < 0) return 0;
    std::size_t total = 0;
    for (int da = 0; da <= n; ++da) total += partitions(da).size() * partitions(n - da).size();
    return total;
}

const UScalar& oscillator_bracket(Family f, int n) {
    if (n < 1) throw std::invalid_argument("bracket index must be positive");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, UScalar> cache;
    std::lock_guard lock(mutex);
    const auto key = std::make_pair(f == Family::a ? 0 : 1, n);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    UScalar v = f == Family::a ? qint(2 * n) * qint_half(-n) / UScalar(n) : UScalar(n);
    return cache.emplace(key, std::move(v)).first->second;
}

FockVector apply_oscillator(Family f, int n, const FockVector& v) {
    if (n == 0) throw std::invalid_argument("zero modes act diagonally; use the sector labels");
    FockVector out;
    for (const auto& [m, c] : v.terms()) {
        BasisMonomial r = m;
        Parts& parts = f == Family::a ? r.a : r.b;
        if (n < 0) {
            insert_part(parts, -n);
            out.add(r, c);
            continue;
        }
        auto it = std::find(parts.begin(), parts.end(), static_cast<std::uint8_t>(n));
        if (it == parts.end()) continue;
        const int mult = static_cast<int>(std::count(parts.begin(), parts.end(), static_cast<std::uint8_t>(n)));
        parts.erase(it);
        out.add(r, c * oscillator_bracket(f, n) * UScalar(mult));
    }
    return out;
}

FockVector apply_shift(Family f, int direction, const FockVector& v) {
    if (direction != 1 && direction != -1) throw std::invalid_argument("shift direction must be +1 or -1");
    FockVector out;
    for (const auto& [m, c] : v.terms()) {
        BasisMonomial r = m;
        if (f == Family::a) {
            r.l1x2 += 2 * direction;
        } else {
            r.l2 += direction;
        }
        out.add(r, c);
    }
    return out;
}

int dbar8_of(const BasisMonomial& m) {
    return -8 * m.degree() + m.l1x2 * m.l1x2 - 4 * m.l2 * m.l2 + 4 * m.l2;
}

Weight weight_of(const BasisMonomial& m) {
    const Rational l1 = m.l1();
    return Weight{Rational(-1, 2) - l1, l1, dbar_of(m)};
}

UScalar extract_vacuum(const FockVector& v, int l1x2, int l2) { return v.coeff(BasisMonomial(l1x2, l2)); }

// ---------------------------------------------------------------------------

LinearOperator::LinearOperator(Column column) : state_(std::make_shared<State>()) {
    state_->column = std::move(column);
}

const FockVector& LinearOperator::column(const BasisMonomial& m) const {
    if (!state_) throw std::logic_error("empty linear operator");
    {
        std::lock_guard lock(state_->mutex);
        if (auto it = state_->cache.find(m); it != state_->cache.end()) return *it->second;
    }
    auto value = std::make_unique<FockVector>(state_->column(m));
    std::lock_guard lock(state_->mutex);
    auto [it, inserted] = state_->cache.try_emplace(m, std::move(value));
    return *it->second;
}

FockVector LinearOperator::apply(const FockVector& v) const {
    FockVector out;
    for (const auto& [m, c] : v.terms()) out.add_scaled(column(m), c);
    return out;
}

}  // namespace qfree
