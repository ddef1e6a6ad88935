#include "qjsd/reference.hpp"

#include <cmath>
#include <numbers>

#include "qjsd/errors.hpp"

namespace qjsd::reference {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PhaseSpaceGrid wigner(const WavefunctionGrid& psi) {
    psi.validate();
    const int n = psi.n();
    const int n2 = 2 * n;

    std::vector<cxd> f(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        cxd s(0.0, 0.0);
        for (int j = 0; j < n; ++j)
            s += psi.samples[static_cast<std::size_t>(j)] *
                 std::exp(cxd(0.0, -kTwoPi * j * k / n));
        f[static_cast<std::size_t>(k)] = s;
    }

    // band-limited half-step samples; the two Nyquist lines carry half weight
    std::vector<cxd> up(static_cast<std::size_t>(n2));
    for (int m = 0; m < n2; ++m) {
        cxd s(0.0, 0.0);
        for (int kk = -n / 2; kk <= n / 2; ++kk) {
            cxd coeff = f[static_cast<std::size_t>(((kk % n) + n) % n)];
            if (kk == n / 2 || kk == -n / 2) coeff *= 0.5;
            s += coeff * std::exp(cxd(0.0, kTwoPi * kk * m / n2));
        }
        up[static_cast<std::size_t>(m)] = s / static_cast<double>(n);
    }

    PhaseSpaceGrid w;
    w.n = n;
    w.q0 = psi.q0;
    w.dq = psi.dq;
    w.dp = kTwoPi / (n * psi.dq);
    w.p0 = -(n / 2) * w.dp;
    w.values.assign(static_cast<std::size_t>(n) * n, cxd(0.0, 0.0));

    const double scale = psi.dq / kTwoPi;
    for (int j = 0; j < n; ++j) {
        std::vector<cxd> c(static_cast<std::size_t>(n), cxd(0.0, 0.0));
        for (int m = 1; m < n; ++m) {  // m = 0 is the unpaired Nyquist sample
            const int mp = m - n / 2;
            const int ip = ((2 * j + mp) % n2 + n2) % n2;
            const int im = ((2 * j - mp) % n2 + n2) % n2;
            c[static_cast<std::size_t>(m)] =
                std::conj(up[static_cast<std::size_t>(ip)]) * up[static_cast<std::size_t>(im)];
        }
        for (int k = 0; k < n; ++k) {
            cxd s(0.0, 0.0);
            for (int m = 1; m < n; ++m)
                s += c[static_cast<std::size_t>(m)] *
                     std::exp(cxd(0.0, kTwoPi * (k - n / 2) * (m - n / 2) / n));
            w.values[static_cast<std::size_t>(j) * n + k] = cxd((scale * s).real(), 0.0);
        }
    }
    return w;
}

DiscreteQJSD build_qjsd(const HashingSpec& spec, const std::vector<HermitianOperator>& observables,
                        double merge_tol) {
    spec.validate();
    if (static_cast<int>(observables.size()) != spec.n_axes)
        throw DimensionMismatchError("axis count mismatch");
    const int d = observables.front().dim();
    for (const auto& o : observables)
        if (o.dim() != d) throw DimensionMismatchError("observables act on different dimensions");

    std::vector<SpectralMeasure> spectra;
    double max_eig = 0.0;
    for (const auto& o : observables) {
        spectra.push_back(eigendecompose(o));
        for (const auto& a : spectra.back().atoms) max_eig = std::max(max_eig, std::abs(a.value));
    }
    if (merge_tol < 0.0) merge_tol = 1e-9 * (1.0 + max_eig);

    std::vector<DiscreteQJSD::Atom> contributions;
    for (const auto& term : spec.terms) {
        const std::size_t nf = term.factors.size();
        std::vector<std::size_t> sizes(nf), digit(nf, 0);
        for (std::size_t fi = 0; fi < nf; ++fi)
            sizes[fi] = spectra[static_cast<std::size_t>(term.factors[fi].axis - 1)].atoms.size();
        while (true) {
            DiscreteQJSD::Atom atom;
            atom.point.assign(static_cast<std::size_t>(spec.n_axes), 0.0);
            const auto& first =
                spectra[static_cast<std::size_t>(term.factors[0].axis - 1)].atoms[digit[0]];
            Matrix op = term.coeff * first.projector;
            atom.point[static_cast<std::size_t>(term.factors[0].axis - 1)] +=
                term.factors[0].fraction * first.value;
            for (std::size_t fi = 1; fi < nf; ++fi) {
                const auto& a = spectra[static_cast<std::size_t>(term.factors[fi].axis - 1)]
                                    .atoms[digit[fi]];
                op = op * a.projector;
                atom.point[static_cast<std::size_t>(term.factors[fi].axis - 1)] +=
                    term.factors[fi].fraction * a.value;
            }
            atom.weight = std::move(op);
            contributions.push_back(std::move(atom));
            // odometer, rightmost digit fastest (= leftmost factor slowest)
            bool done = false;
            for (std::size_t fi = nf;;) {
                if (fi == 0) {
                    done = true;
                    break;
                }
                --fi;
                if (++digit[fi] < sizes[fi]) break;
                digit[fi] = 0;
            }
            if (done) break;
        }
    }

    DiscreteQJSD q;
    q.n_axes = spec.n_axes;
    q.merge_tol = merge_tol;
    q.observables = std::move(spectra);
    q.support = canonicalize_support(std::move(contributions), merge_tol);
    const double res = q.normalization_residual();
    if (res > 1e-9)
        throw InvariantViolationError("QJSD weights do not sum to the identity", res);
    return q;
}

}  // namespace qjsd::reference
