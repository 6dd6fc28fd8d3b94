#include "scca/deflation.hpp"

#include "scca/errors.hpp"
#include "scca/kernels.hpp"

#include <fmt/format.h>

namespace scca {

namespace {

std::vector<double> broadcast(const std::vector<double>& cs, int R, const char* name) {
    if (cs.size() == 1) return std::vector<double>(static_cast<std::size_t>(R), cs.front());
    if (cs.size() != static_cast<std::size_t>(R))
        throw DimensionError(fmt::format("{} must hold 1 or R = {} values, got {}", name, R, cs.size()));
    return cs;
}

void check_r(int R) {
    if (R < 1) throw DomainError("number of components must be at least 1");
}

// u' C v / (u'Gx u * v'Gy v), with the quadratic forms passed in.
double d_value(const Matrix& cross, const Vector& u, const Vector& v, double uu, double vv) {
    Vector cv;
    kernels::gemv(cross, v, cv);
    return u.dot(cv) / (uu * vv);
}

struct Stop {
    bool stop = false;
    std::string reason;
};

}  // namespace

const char* to_string(DeflationMode m) { return m == DeflationMode::CrossCov ? "crosscov" : "data"; }

Matrix deflate_data(const Matrix& m, const Vector& w, const Matrix& metric_factor) {
    Vector fw;
    kernels::gemv(metric_factor, w, fw);
    const double denom = fw.squaredNorm();
    if (!(denom > 0.0)) throw DegenerateVariateError("deflate_data: weight vector has a zero variate");
    Vector gw;
    kernels::gemv_t(metric_factor, fw, gw);
    Vector mw;
    kernels::gemv(m, w, mw);
    return m - mw * (gw / denom).transpose();
}

Matrix deflate_data(const Matrix& m, const Vector& w) {
    const double denom = w.squaredNorm();
    if (!(denom > 0.0)) throw DegenerateVariateError("deflate_data: zero weight vector");
    Vector mw;
    kernels::gemv(m, w, mw);
    return m - mw * (w / denom).transpose();
}

ComponentSequence extract_components_simplified(const Matrix& cross0, int R, const std::vector<double>& c1s,
                                                const std::vector<double>& c2s, const DeflationOptions& opts) {
    check_r(R);
    const auto c1 = broadcast(c1s, R, "c1s");
    const auto c2 = broadcast(c2s, R, "c2s");
    ComponentSequence seq;
    seq.mode = DeflationMode::CrossCov;
    seq.model = Model::Simplified;

    Matrix cross = cross0;
    for (int r = 0; r < R; ++r) {
        if (opts.keep_history) seq.cross_history.push_back(cross);
        SimplifiedFit fit;
        try {
            fit = fit_simplified_cross(cross, c1[r], c2[r], opts.simplified);
        } catch (const SccaError& e) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: {}", r + 1, e.what());
            break;
        }
        if (fit.degenerate) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: degenerate fit", r + 1);
            break;
        }
        const Vector& u = fit.pair.u;
        const Vector& v = fit.pair.v;
        const double d = d_value(cross, u, v, u.squaredNorm(), v.squaredNorm());
        cross -= d * u * v.transpose();
        seq.d_values.push_back(d);
        seq.components.push_back(fit.pair);
    }
    return seq;
}

ComponentSequence extract_components_simplified(const StandardizedDataset& data, int R, const std::vector<double>& c1s,
                                                const std::vector<double>& c2s, DeflationMode mode,
                                                const DeflationOptions& opts) {
    if (mode == DeflationMode::CrossCov) return extract_components_simplified(kernels::crossprod(data.x, data.y), R, c1s, c2s, opts);

    check_r(R);
    const auto c1 = broadcast(c1s, R, "c1s");
    const auto c2 = broadcast(c2s, R, "c2s");
    ComponentSequence seq;
    seq.mode = DeflationMode::Data;
    seq.model = Model::Simplified;

    Matrix x = data.x;
    Matrix y = data.y;
    for (int r = 0; r < R; ++r) {
        const Matrix cross = kernels::crossprod(x, y);
        if (opts.keep_history) seq.cross_history.push_back(cross);
        SimplifiedFit fit;
        try {
            fit = fit_simplified_cross(cross, c1[r], c2[r], opts.simplified);
        } catch (const SccaError& e) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: {}", r + 1, e.what());
            break;
        }
        if (fit.degenerate) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: degenerate fit", r + 1);
            break;
        }
        const Vector& u = fit.pair.u;
        const Vector& v = fit.pair.v;
        seq.d_values.push_back(d_value(cross, u, v, u.squaredNorm(), v.squaredNorm()));
        seq.components.push_back(fit.pair);
        x = deflate_data(x, u);
        y = deflate_data(y, v);
    }
    return seq;
}

ComponentSequence extract_components_standard(const StandardizedDataset& data, int R, const std::vector<double>& c1s,
                                              const std::vector<double>& c2s, DeflationMode mode,
                                              const DeflationOptions& opts) {
    check_r(R);
    const auto c1 = broadcast(c1s, R, "c1s");
    const auto c2 = broadcast(c2s, R, "c2s");
    ComponentSequence seq;
    seq.mode = mode;
    seq.model = Model::Standard;

    const StandardProblem base = StandardProblem::from_data(data);
    Matrix cross = base.cross();
    Matrix x = data.x;
    Matrix y = data.y;
    for (int r = 0; r < R; ++r) {
        if (opts.keep_history) seq.cross_history.push_back(cross);
        StandardFit fit;
        try {
            fit = fit_standard(r == 0 ? base : base.with_cross(cross), c1[r], c2[r], opts.standard);
        } catch (const SccaError& e) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: {}", r + 1, e.what());
            break;
        }
        const Vector& u = fit.pair.u;
        const Vector& v = fit.pair.v;
        Vector xu;
        Vector yv;
        kernels::gemv(data.x, u, xu);
        kernels::gemv(data.y, v, yv);
        const double uu = xu.squaredNorm();
        const double vv = yv.squaredNorm();
        if (fit.degenerate || !(uu > 0.0) || !(vv > 0.0)) {
            seq.truncated = true;
            seq.truncation_reason = fmt::format("component {}: degenerate fit", r + 1);
            break;
        }
        seq.d_values.push_back(d_value(cross, u, v, uu, vv));
        seq.components.push_back(fit.pair);
        if (r + 1 == R) break;

        if (mode == DeflationMode::CrossCov) {
            Vector gu;
            Vector gv;
            kernels::gemv_t(data.x, xu, gu);
            kernels::gemv_t(data.y, yv, gv);
            cross -= seq.d_values.back() * gu * gv.transpose();
        } else {
            x = deflate_data(x, u, data.x);
            y = deflate_data(y, v, data.y);
            cross = kernels::crossprod(x, y);
        }
    }
    return seq;
}

}  // namespace scca
