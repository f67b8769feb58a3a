#include "ajlef/svd.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ajlef/errors.hpp"

namespace ajlef {

SingularSpectrum thin_svd(const LogImage& f) {
    if (f.width <= 0 || f.height <= 0) throw InvalidArgument("thin_svd: empty image");

    Eigen::MatrixXd a(f.height, f.width);
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) a(y, x) = f.at(x, y);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw Error("thin_svd: SVD iteration did not converge within the solver's sweep budget");

    const int r = static_cast<int>(svd.singularValues().size());
    SingularSpectrum s;
    s.m = f.height;
    s.n = f.width;
    s.d.resize(static_cast<size_t>(r));
    s.u_vectors.resize(static_cast<size_t>(r));
    s.v_vectors.resize(static_cast<size_t>(r));

    for (int i = 0; i < r; ++i) {
        s.d[static_cast<size_t>(i)] = svd.singularValues()(i);
        Eigen::VectorXd u = svd.matrixU().col(i);
        Eigen::VectorXd v = svd.matrixV().col(i);
        // Canonical sign: largest-magnitude entry of u is positive.
        int imax = 0;
        u.cwiseAbs().maxCoeff(&imax);
        if (u(imax) < 0.0) {
            u = -u;
            v = -v;
        }
        s.u_vectors[static_cast<size_t>(i)].assign(u.data(), u.data() + u.size());
        s.v_vectors[static_cast<size_t>(i)].assign(v.data(), v.data() + v.size());
    }
    return s;
}

LogImage reconstruct(const SingularSpectrum& s, int terms) {
    if (terms < 1 || terms > s.rank_bound())
        throw InvalidArgument("reconstruct: terms must be in [1, " +
                              std::to_string(s.rank_bound()) + "], got " + std::to_string(terms));
    LogImage out(s.n, s.m, 0.0);
    for (int i = 0; i < terms; ++i) {
        const double d = s.d[static_cast<size_t>(i)];
        const auto& u = s.u_vectors[static_cast<size_t>(i)];
        const auto& v = s.v_vectors[static_cast<size_t>(i)];
        for (int y = 0; y < s.m; ++y)
            for (int x = 0; x < s.n; ++x)
                out.at(x, y) += d * u[static_cast<size_t>(y)] * v[static_cast<size_t>(x)];
    }
    return out;
}

} // namespace ajlef
