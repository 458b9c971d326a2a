#include "mofs/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mofs::construct {

namespace {

// polynomials over GF(p) as little-endian coefficient vectors

std::vector<int> poly_from_index(long long idx, int p) {
    std::vector<int> coeffs;
    while (idx > 0) {
        coeffs.push_back(static_cast<int>(idx % p));
        idx /= p;
    }
    return coeffs;
}

long long poly_to_index(const std::vector<int>& poly, int p) {
    long long idx = 0;
    for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i) idx = idx * p + poly[i];
    return idx;
}

int poly_degree(const std::vector<int>& poly) {
    for (int i = static_cast<int>(poly.size()) - 1; i >= 0; --i)
        if (poly[i] != 0) return i;
    return -1;
}

std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b, const std::vector<int>& mod,
                              int p) {
    std::vector<int> prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    const int du = poly_degree(mod);
    for (int i = static_cast<int>(prod.size()) - 1; i >= du; --i) {
        if (!prod[i]) continue;
        int factor = prod[i];  // mod is monic
        for (int j = 0; j <= du; ++j) {
            int k = i - du + j;
            prod[k] = ((prod[k] - factor * mod[j]) % p + p) % p;
        }
    }
    prod.resize(du);
    return prod;
}

bool poly_divides(const std::vector<int>& divisor, std::vector<int> poly, int p) {
    int dd = poly_degree(divisor);
    int inv_lead = 0;
    for (int i = 1; i < p; ++i)
        if (divisor[dd] * i % p == 1) inv_lead = i;
    int dp = poly_degree(poly);
    while (dp >= dd) {
        int factor = poly[dp] * inv_lead % p;
        for (int j = 0; j <= dd; ++j) {
            int k = dp - dd + j;
            poly[k] = ((poly[k] - factor * divisor[j]) % p + p) % p;
        }
        dp = poly_degree(poly);
    }
    return dp < 0;
}

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<int> smallest_irreducible(int p, int u) {
    if (u == 1) return {0, 1};  // x
    long long lo = 1;
    for (int i = 0; i < u; ++i) lo *= p;
    // monic degree-u polynomials in index order; index = p^u + lower part
    for (long long low = 0; low < lo; ++low) {
        std::vector<int> cand = poly_from_index(lo + low, p);
        bool irreducible = true;
        // trial division by every monic polynomial of degree 1..u/2
        for (int dd = 1; irreducible && 2 * dd <= u; ++dd) {
            long long base = 1;
            for (int i = 0; i < dd; ++i) base *= p;
            for (long long dl = 0; dl < base; ++dl) {
                std::vector<int> divisor = poly_from_index(base + dl, p);
                if (poly_divides(divisor, cand, p)) {
                    irreducible = false;
                    break;
                }
            }
        }
        if (irreducible) return cand;
    }
    throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

GaloisField::GaloisField(int p, int u) : p_(p), u_(u) {
    if (!is_prime(p)) throw std::invalid_argument("GF characteristic " + std::to_string(p) + " is not prime");
    if (u < 1) throw std::invalid_argument("GF extension degree must be positive");
    long long q = 1;
    for (int i = 0; i < u; ++i) {
        q *= p;
        if (q > 4096) throw std::invalid_argument("GF size exceeds 4096");
    }
    q_ = static_cast<int>(q);
    modulus_ = smallest_irreducible(p, u);
    modulus_.resize(u + 1);
    if (q_ <= 256) {
        mul_table_.assign(static_cast<std::size_t>(q_) * q_, 0);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) mul_table_[static_cast<std::size_t>(a) * q_ + b] = mul_raw(a, b);
    }
    for (int a = 1; a < q_; ++a)
        if (mul(a, pow(a, q_ - 2)) != 1)
            throw std::logic_error("field construction failed: " + std::to_string(a) + " has no inverse");
}

int GaloisField::add(int a, int b) const {
    int result = 0, place = 1;
    while (a > 0 || b > 0) {
        result += (a % p_ + b % p_) % p_ * place;
        a /= p_;
        b /= p_;
        place *= p_;
    }
    return result;
}

int GaloisField::neg(int a) const {
    int result = 0, place = 1;
    while (a > 0) {
        result += (p_ - a % p_) % p_ * place;
        a /= p_;
        place *= p_;
    }
    return result;
}

int GaloisField::mul_raw(int a, int b) const {
    auto pa = poly_from_index(a, p_);
    auto pb = poly_from_index(b, p_);
    if (pa.empty() || pb.empty()) return 0;
    return static_cast<int>(poly_to_index(poly_mul_mod(pa, pb, modulus_, p_), p_));
}

int GaloisField::mul(int a, int b) const {
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * q_ + b];
    return mul_raw(a, b);
}

int GaloisField::pow(int a, long long e) const {
    int result = 1, base = a;
    while (e > 0) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

int GaloisField::inv(int a) const {
    if (a == 0) throw std::invalid_argument("zero has no inverse");
    return pow(a, q_ - 2);
}

std::optional<std::pair<int, int>> prime_power(int q) {
    if (q < 2) return std::nullopt;
    for (int p = 2; p <= q; ++p) {
        if (!is_prime(p)) continue;
        if (q % p != 0) continue;
        int u = 0;
        int rest = q;
        while (rest % p == 0) {
            rest /= p;
            ++u;
        }
        if (rest == 1) return std::make_pair(p, u);
        return std::nullopt;
    }
    return std::nullopt;
}

MofsSet complete_mofs_prime_power(int q, int h, int order_bound) {
    auto pu = prime_power(q);
    if (!pu) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
    if (h < 1) throw std::invalid_argument("h must be positive");
    long long order = 1;
    for (int i = 0; i < h; ++i) {
        order *= q;
        if (order > order_bound)
            throw std::invalid_argument("order " + std::to_string(order) + " exceeds bound " +
                                        std::to_string(order_bound));
    }
    const auto [p, u] = *pu;
    const int n = static_cast<int>(order);
    GaloisField field(p, u * h);

    // the subfield of size q: fixed points of x -> x^q
    std::vector<int> subfield;
    for (int z = 0; z < field.size(); ++z)
        if (field.pow(z, q) == z) subfield.push_back(z);
    if (static_cast<int>(subfield.size()) != q) throw std::logic_error("subfield extraction failed");
    std::vector<int> symbol_of(field.size(), -1);
    for (int s = 0; s < q; ++s) symbol_of[subfield[s]] = s;

    // relative trace onto the subfield: x + x^q + x^{q^2} + ... (h terms)
    std::vector<int> trace(field.size());
    for (int z = 0; z < field.size(); ++z) {
        int acc = 0, term = z;
        for (int i = 0; i < h; ++i) {
            acc = field.add(acc, term);
            term = field.pow(term, q);
        }
        if (symbol_of[acc] < 0) throw std::logic_error("trace left the subfield");
        trace[z] = symbol_of[acc];
    }
    {
        std::vector<char> hit(q, 0);
        for (int z = 0; z < field.size(); ++z) hit[trace[z]] = 1;
        if (std::count(hit.begin(), hit.end(), 1) != q) throw std::logic_error("trace is not surjective");
    }

    // nonzero pairs (a,b) up to scaling by the subfield's nonzero elements
    std::vector<char> used(static_cast<std::size_t>(field.size()) * field.size(), 0);
    std::vector<FrequencySquare> squares;
    for (int a = 1; a < field.size(); ++a)
        for (int b = 1; b < field.size(); ++b) {
            if (used[static_cast<std::size_t>(a) * field.size() + b]) continue;
            for (int s = 1; s < q; ++s) {
                int c = subfield[s];
                used[static_cast<std::size_t>(field.mul(c, a)) * field.size() + field.mul(c, b)] = 1;
            }
            Grid g(n, std::vector<int>(n));
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y) g[x][y] = trace[field.add(field.mul(a, x), field.mul(b, y))];
            squares.push_back(FrequencySquare::from_grid(std::move(g), q));
        }

    const long long expected = (order - 1) * (order - 1) / (q - 1);
    if (static_cast<long long>(squares.size()) != expected)
        throw std::logic_error("expected " + std::to_string(expected) + " squares, built " +
                               std::to_string(squares.size()));
    MofsSet set(std::move(squares));
    auto report = validate_mofs(set);
    if (!report.ok()) throw std::logic_error("complete set construction failed verification");
    return set;
}

MofsSet dilate(const MofsSet& set, int d) {
    if (d < 1) throw std::invalid_argument("dilation factor must be positive");
    const int n = set.order();
    std::vector<FrequencySquare> squares;
    squares.reserve(set.size());
    for (int t = 0; t < set.size(); ++t) {
        Grid g(static_cast<std::size_t>(n) * d, std::vector<int>(static_cast<std::size_t>(n) * d));
        for (int r = 0; r < n * d; ++r)
            for (int c = 0; c < n * d; ++c) g[r][c] = set[t].at(r / d, c / d);
        squares.push_back(FrequencySquare::from_grid(std::move(g), set.symbol_count()));
    }
    if (squares.empty()) return MofsSet(set.order() * d, set.symbol_count());
    MofsSet out(std::move(squares));
    auto report = validate_mofs(out);
    if (!report.ok()) throw std::logic_error("dilation failed verification");
    return out;
}

DilationCertificate dilation_certificate(const MofsSet& set, int d, bool jp_relation_found) {
    if (d < 1) throw std::invalid_argument("dilation factor must be positive");
    DilationCertificate cert;
    cert.d = d;
    cert.base_order = set.order();
    cert.base_symbols = set.symbol_count();
    const int m = set.symbol_count();
    const long long n = set.order();
    if (d % m == 0) {
        cert.verdict = DilationVerdict::NotMaximalDivisible;
        cert.witness = circulant_extension(dilate(set, d), d);
        return cert;
    }
    const long long bound_num = (n - 1) * (n - 1);
    const bool complete = (bound_num % (m - 1) == 0) && set.size() == bound_num / (m - 1) && set.all_orthogonal();
    if ((static_cast<long long>(d) * d) % m != 0 && complete) {
        cert.verdict = DilationVerdict::MaximalByCompleteness;
        return cert;
    }
    const int lambda = set.lambda();
    if (d % 2 == 1 && lambda % 2 == 1 && jp_relation_found) {
        cert.verdict = DilationVerdict::MaximalByRelation;
        return cert;
    }
    cert.verdict = DilationVerdict::Unknown;
    return cert;
}

FrequencySquare circulant_extension(const MofsSet& dilated, int d) {
    const int m = dilated.symbol_count();
    if (d < 1 || d % m != 0) throw std::invalid_argument("circulant extension needs m | d");
    const int nd = dilated.order();
    if (nd % d != 0) throw std::invalid_argument("dilation factor does not divide the order");
    for (int t = 0; t < dilated.size(); ++t)
        for (int r = 0; r < nd; ++r)
            for (int c = 0; c < nd; ++c)
                if (dilated[t].at(r, c) != dilated[t].at(r - r % d, c - c % d))
                    throw std::invalid_argument("input is not block-constant at block size " + std::to_string(d));

    // circulant of type (d; d/m): first row holds each symbol d/m times in
    // ascending runs, later rows rotate right by one
    const int rep = d / m;
    Grid block(d, std::vector<int>(d));
    for (int c = 0; c < d; ++c) block[0][c] = c / rep;
    for (int r = 1; r < d; ++r)
        for (int c = 0; c < d; ++c) block[r][c] = block[r - 1][((c - 1) % d + d) % d];

    Grid g(nd, std::vector<int>(nd));
    for (int r = 0; r < nd; ++r)
        for (int c = 0; c < nd; ++c) g[r][c] = block[r % d][c % d];
    FrequencySquare out = FrequencySquare::from_grid(std::move(g), m);
    for (int t = 0; t < dilated.size(); ++t)
        if (!are_orthogonal(out, dilated[t]))
            throw std::logic_error("circulant extension failed orthogonality to member " + std::to_string(t));
    return out;
}

FrequencySquare lift_blocks(const Grid& x, int d) {
    const int n = static_cast<int>(x.size());
    if (n == 0 || d < 1) throw std::invalid_argument("lift_blocks: empty matrix or bad block size");
    if ((static_cast<long long>(d) * n) % 2 != 0) throw std::invalid_argument("lift_blocks: dn must be even");
    const long long target = static_cast<long long>(d) * n / 2;
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(x[r].size()) != n) throw std::invalid_argument("lift_blocks: ragged matrix");
        long long sum = 0;
        for (int c = 0; c < n; ++c) {
            if (x[r][c] < 0 || x[r][c] > d)
                throw std::invalid_argument("lift_blocks: entry (" + std::to_string(r) + "," + std::to_string(c) +
                                            ") outside 0.." + std::to_string(d));
            sum += x[r][c];
        }
        if (sum != target)
            throw std::invalid_argument("lift_blocks: row " + std::to_string(r) + " sums to " + std::to_string(sum) +
                                        " (expected " + std::to_string(target) + ")");
    }
    for (int c = 0; c < n; ++c) {
        long long sum = 0;
        for (int r = 0; r < n; ++r) sum += x[r][c];
        if (sum != target)
            throw std::invalid_argument("lift_blocks: column " + std::to_string(c) + " sums to " +
                                        std::to_string(sum) + " (expected " + std::to_string(target) + ")");
    }
    Grid g(static_cast<std::size_t>(n) * d, std::vector<int>(static_cast<std::size_t>(n) * d));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int ones = x[i][j];
            // circulant block: row a holds ones in columns a, a+1, ..., a+ones-1 (mod d)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) g[i * d + a][j * d + b] = (((b - a) % d + d) % d) < ones ? 1 : 0;
        }
    return FrequencySquare::from_grid(std::move(g), 2);
}

bool high_power_applicable(int q, int h, long long n) {
    auto pu = prime_power(q);
    if (!pu || h < 1 || n < 1) return false;
    const auto [p, u] = *pu;
    int v = 0;
    long long rest = n;
    while (rest % p == 0) {
        rest /= p;
        ++v;
    }
    return v >= u * h && 2 * (v - u * h) < u;
}

}  // namespace mofs::construct
