#pragma once

#include "rotirs/channel.hpp"
#include "rotirs/geometry.hpp"
#include "rotirs/types.hpp"

namespace rotirs {

/// Transmit weights w (M) and the phase vectors of IRS 1 (N1) and IRS 2 (N2),
/// phases in [-pi, pi). Single-IRS solutions leave psi2 empty.
struct BeamformingSolution {
    CVector w;
    RVector psi1;
    RVector psi2;
};

/// Transmit power P_t and noise power sigma_0^2, both watts.
struct LinkBudget {
    double pt = 1.0;
    double noise_power = 1e-11;

    void validate() const;
};

/// Wraps into [-pi, pi).
double wrap_phase(double x);

/// f^H diag(e^{j psi2}) S diag(e^{j psi1}) G w.
cplx cascaded_response(const ChannelSet& ch, const BeamformingSolution& sol);

/// Received SNR (linear): gain1 * gain2 * |f^H Phi2 S Phi1 G w|^2 / sigma^2.
double snr(const ChannelSet& ch, const BeamformingSolution& sol, double gain1, double gain2,
           const LinkBudget& budget);

/// Maximum ratio transmission for the effective channel h^H = f^H Phi2 S Phi1 G.
CVector mrt_weights(const ChannelSet& ch, const RVector& psi1, const RVector& psi2, const LinkBudget& budget);

/// Co-phasing of IRS 1 given psi2 and w: psi1_n = arg(h~_n) - arg(g_n), h~^H = f^H Phi2 S, g = G w.
RVector irs1_phases(const ChannelSet& ch, const RVector& psi2, const CVector& w);

/// Co-phasing of IRS 2 given psi1 and w: psi2_n = arg(f_n) - arg(h_n), h = S Phi1 G w.
RVector irs2_phases(const ChannelSet& ch, const RVector& psi1, const CVector& w);

/// Per-element co-phasing: returns psi with arg(conj(a_n) e^{j psi_n} b_n) = 0,
/// i.e. psi_n = arg(a_n) - arg(b_n). Zero products get phase 0; all-zero throws.
RVector cophase(const CVector& a, const CVector& b, const char* what);

/// Closed-form LoS solution from the rank-one signatures:
/// w = sqrt(Pt) conj(g1)/|g1|, psi1 = -arg(s1 .* g2), psi2 = arg(f) - arg(s2).
BeamformingSolution los_closed_form(const LosSignature& sig, const CVector& f_los, const LinkBudget& budget);

/// Pt beta^3 N1^2 N2^2 M F1 F2 / (sigma^2 t11^2 d11^2 r1^2).
double snr_los_closed_form(const ScenarioGeometry& g, double gain1, double gain2, const RicianParams& params,
                           const LinkBudget& budget);

/// Single-reflection analogue: Pt beta^2 N^2 M F / (sigma^2 t^2 r^2).
double snr_los_single_irs(const SingleIrsGeometry& g, double gain, const LinkBudget& budget, int n_elements,
                          int m_antennas, double beta);

// Single-IRS counterparts (psi2 unused).
cplx single_response(const SingleChannelSet& ch, const BeamformingSolution& sol);
double snr_single(const SingleChannelSet& ch, const BeamformingSolution& sol, double gain,
                  const LinkBudget& budget);
CVector mrt_weights_single(const SingleChannelSet& ch, const RVector& psi, const LinkBudget& budget);
RVector irs_phases_single(const SingleChannelSet& ch, const CVector& w);

}  // namespace rotirs
