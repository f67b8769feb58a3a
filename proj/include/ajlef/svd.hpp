#pragma once

#include <vector>

#include "ajlef/image.hpp"

namespace ajlef {

/// Thin SVD of an m x n log image: r = min(m, n) singular triples with
/// d sorted non-increasing. Signs are canonicalized so the largest-magnitude
/// entry of each left vector is positive.
struct SingularSpectrum {
    int m = 0; // rows (image height)
    int n = 0; // cols (image width)
    std::vector<double> d;                      // r values, non-increasing
    std::vector<std::vector<double>> u_vectors; // r vectors of length m
    std::vector<std::vector<double>> v_vectors; // r vectors of length n

    int rank_bound() const { return static_cast<int>(d.size()); }
};

SingularSpectrum thin_svd(const LogImage& f);

/// Partial reconstruction: sum of the first `terms` rank-one factors d_i u_i v_i^T.
LogImage reconstruct(const SingularSpectrum& s, int terms);

} // namespace ajlef
