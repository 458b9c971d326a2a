#include "mofs/polytope.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace mofs::polytope {

mpz_class gamma_lcm(long long n) {
    if (n < 1) throw std::invalid_argument("gamma_lcm needs n >= 1");
    if (n > 1'000'000) throw std::invalid_argument("gamma_lcm argument too large to evaluate");
    mpz_class acc = 1;
    for (long long i = 2; i <= n; ++i) {
        mpz_class v(static_cast<long>(i));
        mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.get_mpz_t());
    }
    return acc;
}

mpz_class coarsening_modulus(long long m) {
    if (m < 1) throw std::invalid_argument("coarsening modulus needs m >= 1");
    if (m == 1) return 2;
    return mpz_class(static_cast<long>(2 * m - 2)) * gamma_lcm(2 * m - 1);
}

TowerConstants tower_constants(int i_max) {
    if (i_max < 1) throw std::invalid_argument("tower_constants needs i_max >= 1");
    TowerConstants tc;
    tc.m.resize(i_max + 1);
    tc.m[0] = 0;
    for (int i = 1; i <= i_max; ++i) {
        if (i <= 2) {
            tc.m[i] = 1;
        } else if (i == 3) {
            tc.m[i] = 2;
        } else {
            const mpz_class& prev = tc.m[i - 1];
            if (!prev.fits_slong_p() || 2 * prev.get_si() - 1 > 1'000'000)
                throw std::invalid_argument("tower constant m_" + std::to_string(i) +
                                            " is astronomically large and cannot be evaluated");
            mpz_class gamma = gamma_lcm(2 * prev.get_si() - 1);
            tc.m[i] = 2 * prev * (prev - 1) * gamma;
        }
    }
    // the recurrence agrees with m_{i+1} = m_i f(m_i) from index 2 on
    for (int i = 2; i + 1 <= i_max; ++i) {
        if (!tc.m[i].fits_slong_p()) break;
        if (tc.m[i + 1] != tc.m[i] * coarsening_modulus(tc.m[i].get_si()))
            throw std::logic_error("tower recurrence check failed at index " + std::to_string(i));
    }
    return tc;
}

bool contains(const PolytopeSpec& spec, const std::vector<mpq_class>& x) {
    if (static_cast<int>(x.size()) != 2 * spec.m + 1) return false;
    mpq_class sum = 0, weighted = 0;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        if (x[i] < 0) return false;
        sum += x[i];
        weighted += i * x[i];
    }
    return sum == spec.b && weighted == spec.m * spec.b;
}

std::vector<std::vector<mpq_class>> vertices(const PolytopeSpec& spec) {
    if (spec.m < 1 || spec.b <= 0) throw std::invalid_argument("vertices: need m >= 1 and b > 0");
    const int dim = 2 * spec.m + 1;
    std::vector<std::vector<mpq_class>> out;
    for (int i = 0; i < spec.m; ++i)
        for (int j = spec.m + 1; j <= 2 * spec.m; ++j) {
            std::vector<mpq_class> v(dim, 0);
            v[i] = spec.b * mpq_class(j - spec.m, j - i);
            v[j] = spec.b * mpq_class(spec.m - i, j - i);
            v[i].canonicalize();
            v[j].canonicalize();
            out.push_back(std::move(v));
        }
    std::vector<mpq_class> center(dim, 0);
    center[spec.m] = spec.b;
    out.push_back(std::move(center));
    for (const auto& v : out)
        if (!contains(spec, v)) throw std::logic_error("vertex fails polytope membership");
    return out;
}

namespace {

// One integer point of P(f) dominated componentwise by x, found by DFS
// over coordinates with interval pruning on the remaining sum/weight.
bool extract_point(const std::vector<long long>& x, int m, long long f, std::vector<long long>& y) {
    const int dim = 2 * m + 1;
    y.assign(dim, 0);

    // vertex patterns first: they are integral here and usually dominated
    for (int i = 0; i < m; ++i)
        for (int j = m + 1; j <= 2 * m; ++j) {
            long long vi = f * (j - m) / (j - i), vj = f * (m - i) / (j - i);
            if (f * (j - m) % (j - i) != 0 || f * (m - i) % (j - i) != 0) continue;
            if (vi <= x[i] && vj <= x[j]) {
                y[i] = vi;
                y[j] = vj;
                return true;
            }
        }
    if (f <= x[m]) {
        y[m] = f;
        return true;
    }

    // suffix bounds: best/worst achievable weighted sums from coordinate i on
    std::function<bool(int, long long, long long)> dfs = [&](int i, long long count_left,
                                                             long long weight_left) -> bool {
        if (count_left == 0 && weight_left == 0) {
            for (int j = i; j < dim; ++j) y[j] = 0;
            return true;
        }
        if (i == dim) return false;
        long long max_here = std::min(x[i], count_left);
        if (i > 0 && weight_left / i < max_here) max_here = weight_left / i;
        for (long long take = max_here; take >= 0; --take) {
            long long cl = count_left - take;
            long long wl = weight_left - static_cast<long long>(i) * take;
            if (wl < 0) continue;
            // remaining coordinates can contribute between (i+1)*cl... only
            // roughly; cheap necessary bounds
            if (wl > static_cast<long long>(2 * m) * cl) continue;
            if (cl > 0 && i + 1 == dim) continue;
            if (wl < static_cast<long long>(i + 1) * cl) continue;  // weights below are impossible
            y[i] = take;
            if (dfs(i + 1, cl, wl)) return true;
        }
        y[i] = 0;
        return false;
    };
    return dfs(0, f, static_cast<long long>(m) * f);
}

}  // namespace

std::vector<std::vector<long long>> decompose(const std::vector<long long>& x, int m, long long beta) {
    if (m < 1) throw std::invalid_argument("decompose: m >= 1 required");
    if (static_cast<int>(x.size()) != 2 * m + 1)
        throw std::invalid_argument("decompose: x must have 2m+1 entries");
    mpz_class f_big = coarsening_modulus(m);
    if (!f_big.fits_slong_p()) throw std::invalid_argument("decompose: f(m) too large");
    const long long f = f_big.get_si();
    if (beta <= 0 || (2 * beta) % f != 0)
        throw std::invalid_argument("decompose: f(m) must divide the entry sum 2*beta");
    long long sum = 0, weighted = 0;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        if (x[i] < 0) throw std::invalid_argument("decompose: negative entry");
        sum += x[i];
        weighted += static_cast<long long>(i) * x[i];
    }
    if (sum != 2 * beta) throw std::invalid_argument("decompose: entries must sum to 2*beta");
    if (weighted != 2 * static_cast<long long>(m) * beta)
        throw std::invalid_argument("decompose: weighted sum must be 2*m*beta");

    const long long pieces = 2 * beta / f;
    std::vector<std::vector<long long>> out;
    out.reserve(pieces);
    std::vector<long long> rest = x;
    for (long long piece = 0; piece < pieces; ++piece) {
        std::vector<long long> y;
        if (!extract_point(rest, m, f, y))
            throw std::logic_error("decompose: extraction dead-ended (should be impossible)");
        for (int i = 0; i < 2 * m + 1; ++i) rest[i] -= y[i];
        out.push_back(std::move(y));
    }
    for (long long v : rest)
        if (v != 0) throw std::logic_error("decompose: nonzero remainder");
    return out;
}

}  // namespace mofs::polytope
