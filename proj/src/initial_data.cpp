#include "initial_data.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "fft.hpp"

namespace vvlab {

namespace {

// Deposits a unit-discrete-mass bump of radius eps centered at (cx, cy)
// (not necessarily a node), scaled by `weight`, into `out`. Two local
// passes over the support window: one to normalize, one to add.
void deposit_bump(GridSpec grid, double cx, double cy, double eps, double weight,
                  std::vector<double>& out) {
    const int n = grid.n;
    const double h = grid.h();
    const int reach = static_cast<int>(std::ceil(eps / h)) + 1;
    const int i0 = static_cast<int>(std::floor(cx / h));
    const int j0 = static_cast<int>(std::floor(cy / h));

    double sum = 0.0;
    for (int di = -reach; di <= reach; ++di) {
        const int i = ((i0 + di) % n + n) % n;
        const double dx = torus_delta(i * h, cx);
        for (int dj = -reach; dj <= reach; ++dj) {
            const int j = ((j0 + dj) % n + n) % n;
            const double dy = torus_delta(j * h, cy);
            const double xi2 = (dx * dx + dy * dy) / (eps * eps);
            if (xi2 < 1.0) sum += std::exp(-1.0 / (1.0 - xi2));
        }
    }
    if (!(sum > 0.0)) throw ConfigError("bump support contains no grid node");
    const double scale = weight / (sum * h * h);
    for (int di = -reach; di <= reach; ++di) {
        const int i = ((i0 + di) % n + n) % n;
        const double dx = torus_delta(i * h, cx);
        for (int dj = -reach; dj <= reach; ++dj) {
            const int j = ((j0 + dj) % n + n) % n;
            const double dy = torus_delta(j * h, cy);
            const double xi2 = (dx * dx + dy * dy) / (eps * eps);
            if (xi2 < 1.0)
                out[static_cast<size_t>(i) * n + j] += scale * std::exp(-1.0 / (1.0 - xi2));
        }
    }
}

void fill_meta(InitialDatum& d, const std::string& family, double core_scale, double lp) {
    const double h2 = d.grid.h() * d.grid.h();
    double l1 = 0.0, mean = 0.0;
    for (double v : d.omega0) {
        l1 += std::abs(v);
        mean += v;
    }
    d.meta.family = family;
    d.meta.mass = l1 * h2;
    d.meta.core_scale = core_scale;
    d.meta.lp = lp;
    d.meta.mean_abs = std::abs(mean * h2) / (two_pi * two_pi);
}

double wrap_coord(double x) {
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    return y;
}

}  // namespace

InitialDatum h2_point_vortex(GridSpec grid, double m, double cx, double cy, double eps0) {
    if (!(m > 0.0)) throw ConfigError("point vortex mass must be positive");
    if (!(eps0 >= 4.0 * grid.h()))
        throw ConfigError("point vortex core must be at least 4h");
    if (!(eps0 <= two_pi / 4.0)) throw ConfigError("point vortex core too large for torus");
    InitialDatum d(grid);
    deposit_bump(grid, wrap_coord(cx), wrap_coord(cy), eps0, m, d.Omega0);
    const double background = -m / (two_pi * two_pi);
    for (size_t p = 0; p < d.f0.size(); ++p) {
        d.f0[p] = background;
        d.omega0[p] = d.Omega0[p] + background;
    }
    fill_meta(d, "h2_point_vortex", eps0, 0.0);
    return d;
}

InitialDatum vortex_sheet(GridSpec grid, double x0, double y0, double x1, double y1,
                          double gamma, double eps0) {
    if (!(gamma > 0.0)) throw ConfigError("sheet strength must be positive");
    if (!(eps0 >= 4.0 * grid.h())) throw ConfigError("sheet core must be at least 4h");
    if (!(eps0 <= two_pi / 4.0)) throw ConfigError("sheet core too large for torus");
    const double dx = torus_delta(x1, x0);
    const double dy = torus_delta(y1, y0);
    const double len = std::hypot(dx, dy);
    if (!(len > 0.0)) throw ConfigError("sheet endpoints coincide");

    InitialDatum d(grid);
    const int np = std::max(2, static_cast<int>(std::ceil(2.0 * len / grid.h())));
    const double w = gamma * len / np;
    for (int s = 0; s < np; ++s) {
        const double frac = (s + 0.5) / np;
        deposit_bump(grid, wrap_coord(x0 + frac * dx), wrap_coord(y0 + frac * dy), eps0, w,
                     d.Omega0);
    }
    const double background = -gamma * len / (two_pi * two_pi);
    for (size_t p = 0; p < d.f0.size(); ++p) {
        d.f0[p] = background;
        d.omega0[p] = d.Omega0[p] + background;
    }
    fill_meta(d, "vortex_sheet", eps0, 0.0);
    return d;
}

InitialDatum lp_blob(GridSpec grid, double p, double amplitude, double scale,
                     double cx, double cy) {
    if (!(p > 1.0)) throw ConfigError("blob exponent must exceed 1");
    if (!(amplitude > 0.0)) throw ConfigError("blob amplitude must be positive");
    if (!(scale > 0.0) || scale > two_pi / 2.0)
        throw ConfigError("blob scale must lie in (0, pi]");
    InitialDatum d(grid);
    const int n = grid.n;
    const double h = grid.h();
    const double cxw = wrap_coord(cx), cyw = wrap_coord(cy);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = torus_delta(i * h, cxw);
        for (int j = 0; j < n; ++j) {
            const double dy = torus_delta(j * h, cyw);
            const double r = std::hypot(dx, dy);
            const double xi = r / scale;
            double v = 0.0;
            if (xi < 1.0)
                v = amplitude * std::pow(std::max(r, h), -2.0 / p) *
                    std::exp(1.0 - 1.0 / (1.0 - xi * xi));
            d.f0[static_cast<size_t>(i) * n + j] = v;
            sum += v;
        }
    }
    const double mean = sum / (static_cast<double>(n) * n);
    for (size_t q = 0; q < d.f0.size(); ++q) {
        d.f0[q] -= mean;
        d.omega0[q] = d.f0[q];
    }
    fill_meta(d, "lp_blob", scale, p);
    return d;
}

InitialDatum smooth_control(GridSpec grid) {
    InitialDatum d(grid);
    const int n = grid.n;
    const double h = grid.h();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = -2.0 * std::cos(i * h) * std::cos(j * h);
            d.omega0[static_cast<size_t>(i) * n + j] = v;
            d.f0[static_cast<size_t>(i) * n + j] = v;
        }
    fill_meta(d, "smooth_control", 0.0, 0.0);
    return d;
}

InitialDatum make_datum(GridSpec grid, const FamilySpec& spec, double nu, double nu_max) {
    double eps = spec.core_radius;
    if (spec.scaling == FamilySpec::CoreScaling::sqrt_nu) {
        if (!(nu > 0.0) || !(nu_max > 0.0)) throw ConfigError("core scaling requires nu > 0");
        eps = std::max(spec.core_radius * std::sqrt(nu / nu_max), 4.0 * grid.h());
    }
    switch (spec.kind) {
        case FamilySpec::Kind::point_vortex:
            return h2_point_vortex(grid, spec.mass, spec.cx, spec.cy, eps);
        case FamilySpec::Kind::vortex_sheet:
            return vortex_sheet(grid, spec.sheet_x0, spec.sheet_y0, spec.sheet_x1,
                                spec.sheet_y1, spec.mass, eps);
        case FamilySpec::Kind::lp_blob:
            return lp_blob(grid, spec.blob_p, spec.blob_amplitude, spec.blob_scale, spec.cx,
                           spec.cy);
        case FamilySpec::Kind::smooth_control:
            return smooth_control(grid);
    }
    throw ConfigError("unknown datum family");
}

FamilyReport validate_hypotheses(const std::vector<InitialDatum>& data,
                                 const std::vector<double>& nus,
                                 const std::vector<double>& lambda_list) {
    if (data.empty()) throw ConfigError("family validation needs at least one member");
    if (nus.size() != data.size())
        throw ConfigError("family validation needs one viscosity per member");
    const GridSpec grid = data.front().grid;
    for (const auto& d : data)
        if (!(d.grid == grid)) throw ConfigError("family members must share one grid");

    FamilyReport rep;
    const double h2 = grid.h() * grid.h();
    const size_t q = data.size();
    Fft fft(grid);

    std::vector<std::vector<cplx>> omega_hat(q);
    for (size_t i = 0; i < q; ++i) {
        const auto& d = data[i];
        MemberCheck mc;
        mc.nu = nus[i];
        double l1 = 0.0, mean = 0.0, linf = 0.0, mino = 0.0, defect = 0.0;
        for (size_t p = 0; p < d.omega0.size(); ++p) {
            l1 += std::abs(d.omega0[p]);
            mean += d.omega0[p];
            linf = std::max(linf, std::abs(d.omega0[p]));
            mino = std::min(mino, d.Omega0[p]);
            defect = std::max(defect, std::abs(d.f0[p] + d.Omega0[p] - d.omega0[p]));
        }
        mc.mass = l1 * h2;
        mc.mean_abs = std::abs(mean * h2) / (two_pi * two_pi);
        mc.linf = linf;
        mc.min_Omega = mino;
        mc.decomp_defect = defect;
        const double scale = std::max(1.0, linf);
        mc.sign_ok = mino >= -1e-12 * scale;
        mc.mean_ok = mc.mean_abs <= 1e-10 * scale;
        mc.decomp_ok = defect <= 1e-10 * scale;
        for (double lam : lambda_list) {
            double tail = 0.0;
            for (double v : d.f0)
                if (std::abs(v) > lam) tail += std::abs(v);
            mc.f_tails.emplace_back(lam, tail * h2);
        }
        rep.sup_mass = std::max(rep.sup_mass, mc.mass);
        rep.uniform_ok = rep.uniform_ok && mc.sign_ok && mc.mean_ok && mc.decomp_ok;
        rep.members.push_back(std::move(mc));

        omega_hat[i] = fft.forward(d.omega0);
        omega_hat[i][0] = cplx(0.0, 0.0);
    }

    rep.u_dist.assign(q, std::vector<double>(q, 0.0));
    for (size_t i = 0; i < q; ++i)
        for (size_t j = i + 1; j < q; ++j) {
            const double dist = velocity_distance(grid, omega_hat[i], omega_hat[j]);
            rep.u_dist[i][j] = rep.u_dist[j][i] = dist;
            rep.max_pair_dist = std::max(rep.max_pair_dist, dist);
        }
    return rep;
}

}  // namespace vvlab
