#include "rotirs/channel.hpp"

#include <algorithm>
#include <cmath>

#include "rotirs/kernels.hpp"
#include "rotirs/rng.hpp"

namespace rotirs {

namespace {

struct PointsSoA {
    std::vector<double> x, y, z;

    explicit PointsSoA(std::span<const Vec3> pts) : x(pts.size()), y(pts.size()), z(pts.size()) {
        for (size_t i = 0; i < pts.size(); ++i) {
            x[i] = pts[i].x();
            y[i] = pts[i].y();
            z[i] = pts[i].z();
        }
    }
};

void fill_spherical(std::span<const Vec3> tx, std::span<const Vec3> rx, double wavenumber, double amplitude,
                    CMatrix& out) {
    const PointsSoA r(rx);
    out.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    const auto& k = kernels::active_kernels();
    for (size_t m = 0; m < tx.size(); ++m) {
        k.distance_phasors(r.x.data(), r.y.data(), r.z.data(), rx.size(), tx[m].data(), wavenumber, amplitude,
                           out.col(static_cast<Eigen::Index>(m)).data());
    }
}

// Offsets of each element from its array's first element, projected on the
// anchor-to-anchor direction.
struct PlanarProjection {
    double distance = 0.0;
    std::vector<double> tx, rx;
};

PlanarProjection planar_projection(std::span<const Vec3> tx, std::span<const Vec3> rx) {
    PlanarProjection p;
    const Vec3 axis = rx[0] - tx[0];
    p.distance = axis.norm();
    if (p.distance == 0.0) throw DegenerateGeometryError("planar LoS: array anchors coincide");
    const Vec3 u = axis / p.distance;
    p.tx.reserve(tx.size());
    p.rx.reserve(rx.size());
    for (const Vec3& t : tx) p.tx.push_back(u.dot(t - tx[0]));
    for (const Vec3& r : rx) p.rx.push_back(u.dot(r - rx[0]));
    return p;
}

void fill_planar(std::span<const Vec3> tx, std::span<const Vec3> rx, double wavenumber, double amplitude,
                 CMatrix& out) {
    const PlanarProjection p = planar_projection(tx, rx);
    out.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    std::vector<double> phase(rx.size());
    const auto& k = kernels::active_kernels();
    for (size_t m = 0; m < tx.size(); ++m) {
        for (size_t n = 0; n < rx.size(); ++n) phase[n] = -wavenumber * (p.distance + p.rx[n] - p.tx[m]);
        k.phasors(phase.data(), phase.size(), amplitude, out.col(static_cast<Eigen::Index>(m)).data());
    }
}

void fill_los(LosModel model, std::span<const Vec3> tx, std::span<const Vec3> rx, double wavenumber,
              double amplitude, CMatrix& out) {
    if (model == LosModel::Planar) {
        fill_planar(tx, rx, wavenumber, amplitude, out);
    } else {
        fill_spherical(tx, rx, wavenumber, amplitude, out);
    }
}

double array_extent(std::span<const Vec3> pts) {
    double e = 0.0;
    for (const Vec3& p : pts) e = std::max(e, (p - pts[0]).norm());
    return e;
}

bool is_pure(double kappa) { return std::isinf(kappa) && kappa > 0.0; }

double los_weight(double kappa) { return std::sqrt(kappa / (kappa + 1.0)); }
double nlos_weight(double kappa) { return std::sqrt(1.0 / (kappa + 1.0)); }

// los <- w_los * los + w_nlos * scale * draws, optionally with per-entry distances.
void mix_in_place(CMatrix& los, double kappa, double beta, double amp_distance, const CMatrix& draws,
                  NlosAmplitude mode, std::span<const Vec3> tx, std::span<const Vec3> rx) {
    if (is_pure(kappa)) return;
    const double wl = los_weight(kappa);
    const double wn = nlos_weight(kappa);
    if (mode == NlosAmplitude::AnchorDistance) {
        // Real weights act on re and im alike, so blend the interleaved doubles directly.
        const Eigen::Index n = 2 * los.size();
        Eigen::Map<Eigen::ArrayXd> out(reinterpret_cast<double*>(los.data()), n);
        const Eigen::Map<const Eigen::ArrayXd> nlos(reinterpret_cast<const double*>(draws.data()), n);
        out = wl * out + (wn * std::sqrt(beta) / amp_distance) * nlos;
        return;
    }
    for (Eigen::Index m = 0; m < los.cols(); ++m) {
        for (Eigen::Index n = 0; n < los.rows(); ++n) {
            const double d = (rx[static_cast<size_t>(n)] - tx[static_cast<size_t>(m)]).norm();
            los(n, m) = wl * los(n, m) + (wn * std::sqrt(beta) / d) * draws(n, m);
        }
    }
}

double wavenumber(double wavelength) { return 2.0 * kPi / wavelength; }

}  // namespace

RicianParams RicianParams::uniform(double kappa, double beta) { return RicianParams{kappa, kappa, kappa, beta}; }

void RicianParams::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive");
    for (double k : {kappa_g, kappa_s, kappa_f}) {
        if (std::isnan(k) || k < 0.0) throw DomainError("Rician factor must be >= 0 or infinite");
    }
}

bool RicianParams::pure_los() const { return is_pure(kappa_g) && is_pure(kappa_s) && is_pure(kappa_f); }

FarFieldDistances far_field_distances(const ScenarioGeometry& g) {
    return FarFieldDistances{(g.irs1_origin() - g.bs_origin()).norm(), (g.irs2_origin() - g.irs1_origin()).norm(),
                             (g.user_pos() - g.irs2_origin()).norm()};
}

CMatrix los_matrix(std::span<const Vec3> tx, std::span<const Vec3> rx, double beta, double wavelength,
                   double amp_distance) {
    if (!(amp_distance > 0.0)) throw DomainError("los_matrix: amplitude distance must be positive");
    CMatrix out;
    fill_spherical(tx, rx, wavenumber(wavelength), std::sqrt(beta) / amp_distance, out);
    return out;
}

CMatrix planar_los_matrix(std::span<const Vec3> tx, std::span<const Vec3> rx, double beta, double wavelength,
                          double amp_distance) {
    if (!(amp_distance > 0.0)) throw DomainError("planar_los_matrix: amplitude distance must be positive");
    CMatrix out;
    fill_planar(tx, rx, wavenumber(wavelength), std::sqrt(beta) / amp_distance, out);
    return out;
}

LosSignature los_signature_decomposition(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2,
                                         double beta, double far_field_threshold) {
    const double k = wavenumber(g.wavelength());
    const auto bs = bs_antenna_positions(g);
    const auto e1 = irs_element_positions(g.irs1_origin(), g.irs1_layout(), o1, Surface::Irs1);
    const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);

    LosSignature sig;
    auto factor = [k, beta](std::span<const Vec3> tx, std::span<const Vec3> rx, CVector& tx_side,
                            CVector& rx_side) {
        const PlanarProjection p = planar_projection(tx, rx);
        const double amp = std::sqrt(beta) / p.distance;
        tx_side.resize(static_cast<Eigen::Index>(tx.size()));
        rx_side.resize(static_cast<Eigen::Index>(rx.size()));
        for (size_t m = 0; m < tx.size(); ++m) {
            tx_side(static_cast<Eigen::Index>(m)) = std::polar(amp, -k * (p.distance - p.tx[m]));
        }
        for (size_t n = 0; n < rx.size(); ++n) {
            rx_side(static_cast<Eigen::Index>(n)) = std::polar(1.0, -k * p.rx[n]);
        }
        return (array_extent(tx) + array_extent(rx)) / p.distance;
    };
    const double ratio_g = factor(bs, e1, sig.g1, sig.g2);
    const double ratio_s = factor(e1, e2, sig.s1, sig.s2);
    sig.aperture_ratio = std::max(ratio_g, ratio_s);
    sig.far_field = sig.aperture_ratio <= far_field_threshold;
    return sig;
}

CVector planar_user_channel(const ScenarioGeometry& g, const Orientation& o2, double beta) {
    const auto e2 = irs_element_positions(g.irs2_origin(), g.irs2_layout(), o2, Surface::Irs2);
    const std::vector<Vec3> user{g.user_pos()};
    const double r1 = (g.user_pos() - g.irs2_origin()).norm();
    CMatrix f = planar_los_matrix(user, e2, beta, g.wavelength(), r1);
    return f.col(0);
}

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix out(rows, cols);
    for (Eigen::Index m = 0; m < cols; ++m) {
        for (Eigen::Index n = 0; n < rows; ++n) {
            const double re = normal(rng);
            const double im = normal(rng);
            out(n, m) = cplx(re, im);
        }
    }
    return out;
}

CMatrix rician_channel(const CMatrix& los, double kappa, double beta, double amp_distance, std::uint64_t seed) {
    if (std::isnan(kappa) || kappa < 0.0) throw DomainError("Rician factor must be >= 0 or infinite");
    if (!(amp_distance > 0.0)) throw DomainError("rician_channel: amplitude distance must be positive");
    CMatrix out = los;
    if (is_pure(kappa)) return out;
    const CMatrix draws = complex_gaussian(los.rows(), los.cols(), seed);
    mix_in_place(out, kappa, beta, amp_distance, draws, NlosAmplitude::AnchorDistance, {}, {});
    return out;
}

ChannelSynthesizer::ChannelSynthesizer(const ScenarioGeometry& g, const RicianParams& params, std::uint64_t seed,
                                       ChannelOptions options)
    : geometry_(g), params_(params), options_(options), dist_(far_field_distances(g)), bs_positions_(bs_antenna_positions(g)) {
    params_.validate();
    const Eigen::Index m = g.bs_antennas(), n1 = g.irs1_elements(), n2 = g.irs2_elements();
    if (!is_pure(params_.kappa_g)) draws_g_ = complex_gaussian(n1, m, derive_seed(seed, kLinkG));
    if (!is_pure(params_.kappa_s)) draws_s_ = complex_gaussian(n2, n1, derive_seed(seed, kLinkS));
    if (!is_pure(params_.kappa_f)) draws_f_ = complex_gaussian(n2, 1, derive_seed(seed, kLinkF)).col(0);
}

void ChannelSynthesizer::synthesize_into(const Orientation& o1, const Orientation& o2, ChannelSet& out) const {
    const double k = wavenumber(geometry_.wavelength());
    const double sb = std::sqrt(params_.beta);
    const auto e1 = irs_element_positions(geometry_.irs1_origin(), geometry_.irs1_layout(), o1, Surface::Irs1);
    const auto e2 = irs_element_positions(geometry_.irs2_origin(), geometry_.irs2_layout(), o2, Surface::Irs2);
    const std::vector<Vec3> user{geometry_.user_pos()};

    fill_los(options_.los_model, bs_positions_, e1, k, sb / dist_.t11, out.g);
    fill_los(options_.los_model, e1, e2, k, sb / dist_.d11, out.s);
    CMatrix f;
    fill_los(options_.los_model, user, e2, k, sb / dist_.r1, f);

    mix_in_place(out.g, params_.kappa_g, params_.beta, dist_.t11, draws_g_, options_.nlos_amplitude, bs_positions_, e1);
    mix_in_place(out.s, params_.kappa_s, params_.beta, dist_.d11, draws_s_, options_.nlos_amplitude, e1, e2);
    if (!is_pure(params_.kappa_f)) {
        CMatrix draws_f = draws_f_;
        mix_in_place(f, params_.kappa_f, params_.beta, dist_.r1, draws_f, options_.nlos_amplitude, user, e2);
    }
    out.f = f.col(0);
}

ChannelSet ChannelSynthesizer::operator()(const Orientation& o1, const Orientation& o2) const {
    ChannelSet out;
    synthesize_into(o1, o2, out);
    return out;
}

ChannelSet synthesize_channels(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2,
                               const RicianParams& params, std::uint64_t seed, ChannelOptions options) {
    return ChannelSynthesizer(g, params, seed, options)(o1, o2);
}

SingleChannelSynthesizer::SingleChannelSynthesizer(const SingleIrsGeometry& g, const RicianParams& params,
                                                   std::uint64_t seed, ChannelOptions options)
    : geometry_(g),
      params_(params),
      options_(options),
      t1_((g.irs_origin() - g.bs_origin()).norm()),
      r1_((g.user_pos() - g.irs_origin()).norm()),
      bs_positions_(bs_antenna_positions(g.bs_origin(), g.bs_layout())) {
    params_.validate();
    const Eigen::Index m = g.bs_layout().size(), n = g.irs_layout().size();
    if (!is_pure(params_.kappa_g)) draws_g_ = complex_gaussian(n, m, derive_seed(seed, kLinkG));
    if (!is_pure(params_.kappa_f)) draws_f_ = complex_gaussian(n, 1, derive_seed(seed, kLinkF)).col(0);
}

SingleChannelSet SingleChannelSynthesizer::operator()(const Orientation& o) const {
    const double k = wavenumber(geometry_.wavelength());
    const double sb = std::sqrt(params_.beta);
    const auto e = irs_element_positions(geometry_.irs_origin(), geometry_.irs_layout(), o, Surface::Irs1);
    const std::vector<Vec3> user{geometry_.user_pos()};
    SingleChannelSet out;
    fill_los(options_.los_model, bs_positions_, e, k, sb / t1_, out.g);
    CMatrix f;
    fill_los(options_.los_model, user, e, k, sb / r1_, f);
    mix_in_place(out.g, params_.kappa_g, params_.beta, t1_, draws_g_, options_.nlos_amplitude, bs_positions_, e);
    if (!is_pure(params_.kappa_f)) {
        CMatrix draws_f = draws_f_;
        mix_in_place(f, params_.kappa_f, params_.beta, r1_, draws_f, options_.nlos_amplitude, user, e);
    }
    out.f = f.col(0);
    return out;
}

}  // namespace rotirs
