#include "rotirs/beamform.hpp"

#include <cmath>
#include <string>

#include "rotirs/kernels.hpp"

namespace rotirs {

namespace {

CVector unit_phasors(const RVector& psi) {
    CVector out(psi.size());
    kernels::active_kernels().phasors(psi.data(), static_cast<size_t>(psi.size()), 1.0, out.data());
    return out;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

void check_dims(const ChannelSet& ch, Eigen::Index w, Eigen::Index psi1, Eigen::Index psi2) {
    require(ch.s.cols() == ch.g.rows(), "S columns must match G rows");
    require(ch.f.size() == ch.s.rows(), "f length must match S rows");
    require(w < 0 || w == ch.g.cols(), "w length must match G columns");
    require(psi1 < 0 || psi1 == ch.g.rows(), "psi1 length must match IRS 1 size");
    require(psi2 < 0 || psi2 == ch.s.rows(), "psi2 length must match IRS 2 size");
}

CVector multiply(const CMatrix& a, const CVector& x) {
    CVector y(a.rows());
    kernels::active_kernels().matvec(a.data(), static_cast<size_t>(a.rows()), static_cast<size_t>(a.cols()),
                                     x.data(), y.data());
    return y;
}

CVector hadamard(const CVector& a, const CVector& b) {
    CVector out(a.size());
    kernels::active_kernels().hadamard(a.data(), b.data(), static_cast<size_t>(a.size()), out.data());
    return out;
}

CVector scaled_unit(const CVector& h, double pt, const char* what) {
    const double norm = h.norm();
    if (!(norm > 0.0)) throw DegenerateChannelError(std::string(what) + ": effective channel is zero");
    return (std::sqrt(pt) / norm) * h;
}

}  // namespace

void LinkBudget::validate() const {
    if (!(pt > 0.0) || !std::isfinite(pt)) throw DomainError("transmit power must be positive");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power)) throw DomainError("noise power must be positive");
}

double wrap_phase(double x) {
    double y = std::fmod(x + kPi, 2.0 * kPi);
    if (y < 0.0) y += 2.0 * kPi;
    y -= kPi;
    return y >= kPi ? -kPi : y;
}

cplx cascaded_response(const ChannelSet& ch, const BeamformingSolution& sol) {
    check_dims(ch, sol.w.size(), sol.psi1.size(), sol.psi2.size());
    const CVector u = hadamard(unit_phasors(sol.psi1), multiply(ch.g, sol.w));
    const CVector z = hadamard(unit_phasors(sol.psi2), multiply(ch.s, u));
    cplx r;
    kernels::active_kernels().dotc(ch.f.data(), z.data(), static_cast<size_t>(z.size()), &r);
    return r;
}

double snr(const ChannelSet& ch, const BeamformingSolution& sol, double gain1, double gain2,
           const LinkBudget& budget) {
    if (gain1 == 0.0 || gain2 == 0.0) return 0.0;
    return gain1 * gain2 * std::norm(cascaded_response(ch, sol)) / budget.noise_power;
}

CVector mrt_weights(const ChannelSet& ch, const RVector& psi1, const RVector& psi2, const LinkBudget& budget) {
    check_dims(ch, -1, psi1.size(), psi2.size());
    const CVector x = unit_phasors(psi2).conjugate().cwiseProduct(ch.f);
    const CVector y = ch.s.adjoint() * x;
    const CVector z = unit_phasors(psi1).conjugate().cwiseProduct(y);
    return scaled_unit(ch.g.adjoint() * z, budget.pt, "mrt_weights");
}

RVector cophase(const CVector& a, const CVector& b, const char* what) {
    require(a.size() == b.size(), std::string(what) + ": operand lengths differ");
    RVector psi(a.size());
    bool any = false;
    for (Eigen::Index n = 0; n < a.size(); ++n) {
        if (a(n) == cplx(0.0) || b(n) == cplx(0.0)) {
            psi(n) = 0.0;
            continue;
        }
        any = true;
        psi(n) = wrap_phase(std::arg(a(n)) - std::arg(b(n)));
    }
    if (!any) throw DegenerateChannelError(std::string(what) + ": every product term is zero");
    return psi;
}

RVector irs1_phases(const ChannelSet& ch, const RVector& psi2, const CVector& w) {
    check_dims(ch, w.size(), -1, psi2.size());
    const CVector h_tilde = ch.s.adjoint() * unit_phasors(psi2).conjugate().cwiseProduct(ch.f);
    return cophase(h_tilde, multiply(ch.g, w), "irs1_phases");
}

RVector irs2_phases(const ChannelSet& ch, const RVector& psi1, const CVector& w) {
    check_dims(ch, w.size(), psi1.size(), -1);
    const CVector h_bar = multiply(ch.s, hadamard(unit_phasors(psi1), multiply(ch.g, w)));
    return cophase(ch.f, h_bar, "irs2_phases");
}

BeamformingSolution los_closed_form(const LosSignature& sig, const CVector& f_los, const LinkBudget& budget) {
    require(sig.g2.size() == sig.s1.size(), "signature: g2 and s1 lengths differ");
    require(sig.s2.size() == f_los.size(), "signature: s2 and f lengths differ");
    BeamformingSolution sol;
    sol.w = scaled_unit(sig.g1.conjugate(), budget.pt, "los_closed_form");
    sol.psi1.resize(sig.g2.size());
    for (Eigen::Index n = 0; n < sig.g2.size(); ++n) {
        const cplx p = sig.s1(n) * sig.g2(n);
        if (p == cplx(0.0)) throw DegenerateChannelError("los_closed_form: zero IRS 1 signature entry");
        sol.psi1(n) = wrap_phase(-std::arg(p));
    }
    sol.psi2 = cophase(f_los, sig.s2, "los_closed_form");
    return sol;
}

double snr_los_closed_form(const ScenarioGeometry& g, double gain1, double gain2, const RicianParams& params,
                           const LinkBudget& budget) {
    const FarFieldDistances d = far_field_distances(g);
    const double n1 = g.irs1_elements(), n2 = g.irs2_elements(), m = g.bs_antennas();
    const double b = params.beta;
    return gain1 * gain2 * budget.pt * b * b * b * n1 * n1 * n2 * n2 * m /
           (budget.noise_power * d.t11 * d.t11 * d.d11 * d.d11 * d.r1 * d.r1);
}

double snr_los_single_irs(const SingleIrsGeometry& g, double gain, const LinkBudget& budget, int n_elements,
                          int m_antennas, double beta) {
    const double t = (g.irs_origin() - g.bs_origin()).norm();
    const double r = (g.user_pos() - g.irs_origin()).norm();
    const double n = n_elements;
    return gain * budget.pt * beta * beta * n * n * m_antennas / (budget.noise_power * t * t * r * r);
}

cplx single_response(const SingleChannelSet& ch, const BeamformingSolution& sol) {
    require(sol.w.size() == ch.g.cols(), "w length must match G columns");
    require(sol.psi1.size() == ch.g.rows() && ch.f.size() == ch.g.rows(), "IRS size mismatch");
    const CVector z = hadamard(unit_phasors(sol.psi1), multiply(ch.g, sol.w));
    cplx r;
    kernels::active_kernels().dotc(ch.f.data(), z.data(), static_cast<size_t>(z.size()), &r);
    return r;
}

double snr_single(const SingleChannelSet& ch, const BeamformingSolution& sol, double gain,
                  const LinkBudget& budget) {
    if (gain == 0.0) return 0.0;
    return gain * std::norm(single_response(ch, sol)) / budget.noise_power;
}

CVector mrt_weights_single(const SingleChannelSet& ch, const RVector& psi, const LinkBudget& budget) {
    require(psi.size() == ch.g.rows() && ch.f.size() == ch.g.rows(), "IRS size mismatch");
    const CVector z = unit_phasors(psi).conjugate().cwiseProduct(ch.f);
    return scaled_unit(ch.g.adjoint() * z, budget.pt, "mrt_weights_single");
}

RVector irs_phases_single(const SingleChannelSet& ch, const CVector& w) {
    require(w.size() == ch.g.cols(), "w length must match G columns");
    return cophase(ch.f, multiply(ch.g, w), "irs_phases_single");
}

}  // namespace rotirs
