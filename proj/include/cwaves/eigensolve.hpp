#pragma once

// Symmetric tridiagonal eigensolver: implicit-shift QL for the full spectrum
// (eigenvalues only, deterministic) and inverse iteration for selected
// eigenvectors. Self-contained; matrices at desk scale are M <= a few
// thousand, where this is faster than a general dense solve.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cwaves/errors.hpp"
#include "cwaves/linalg.hpp"

namespace cwaves {

/// All eigenvalues of the symmetric tridiagonal (diag, offdiag constant),
/// ascending. Implicit-shift QL, O(n^2), no eigenvector accumulation.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> d, double off) {
    const std::size_t n = d.size();
    if (n == 0) return {};
    std::vector<double> e(n, off);
    e[n - 1] = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw numerical_error("tridiag_eigenvalues: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t k = m; k-- > l;) {
                    double f = s * e[k];
                    double b = c * e[k];
                    r = std::hypot(f, g);
                    e[k + 1] = r;
                    if (r == 0.0) {
                        d[k + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[k + 1] - p;
                    r = (d[k] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[k + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

namespace detail {

// deterministic start vector for inverse iteration (splitmix64 stream)
inline void seeded_start(std::vector<double>& b, std::uint64_t seed) {
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 0xBF58476D1CE4E5B9ull;
    for (auto& v : b) {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z = z ^ (z >> 31);
        v = static_cast<double>(z >> 11) / 9007199254740992.0 - 0.5;
    }
}

inline double euclid_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline void normalize(std::vector<double>& v) {
    const double n = euclid_norm(v);
    if (n > 0) {
        for (auto& x : v) x /= n;
    }
}

} // namespace detail

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector; // euclidean-normalized, interior nodes
    double residual = 0.0;      // ||T v - mu v||_2 for unit v
};

/// Eigenvectors for the k lowest eigenvalues via inverse iteration with
/// Gram-Schmidt reorthogonalization; residuals computed with the QL values.
inline std::vector<EigenPair> tridiag_lowest_pairs(const std::vector<double>& diag, double off,
                                                   const std::vector<double>& all_eigs,
                                                   std::size_t k) {
    const std::size_t n = diag.size();
    k = std::min(k, n);
    double scale = 0.0;
    for (double d : diag) scale = std::max(scale, std::abs(d));
    scale = std::max(scale, std::abs(off));

    std::vector<EigenPair> out;
    out.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        double mu = all_eigs[j];
        // keep shifts of clustered eigenvalues apart (dstein-style nudging)
        double sigma = mu;
        const double sep = 1e-11 * std::max(1.0, scale);
        for (const auto& prev : out)
            if (std::abs(sigma - prev.value) < sep) sigma += sep;

        std::vector<double> d_shift(diag);
        for (auto& d : d_shift) d -= sigma;
        TridiagLU lu = TridiagLU::symmetric(d_shift, off);
        int attempts = 0;
        while (lu.singular() && attempts < 8) {
            sigma += sep * (1 << attempts);
            d_shift = diag;
            for (auto& d : d_shift) d -= sigma;
            lu = TridiagLU::symmetric(d_shift, off);
            ++attempts;
        }
        if (lu.singular()) throw numerical_error("inverse iteration: persistent singular shift");

        std::vector<double> v(n);
        detail::seeded_start(v, 0xC0FFEEull + j);
        detail::normalize(v);
        for (int it = 0; it < 5; ++it) {
            lu.solve_in_place(v);
            // orthogonalize against previously computed vectors
            for (const auto& prev : out) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += v[i] * prev.vector[i];
                for (std::size_t i = 0; i < n; ++i) v[i] -= dot * prev.vector[i];
            }
            detail::normalize(v);
        }
        // fix sign: largest-magnitude entry positive, for determinism
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        if (v[imax] < 0.0)
            for (auto& x : v) x = -x;

        std::vector<double> tv;
        sym_tridiag_matvec(diag, off, v, tv);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = tv[i] - mu * v[i];
            res += r * r;
        }
        EigenPair p;
        p.value = mu;
        p.vector = std::move(v);
        p.residual = std::sqrt(res);
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace cwaves
