#include "logcone/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include "logcone/error.hpp"

namespace logcone {

namespace {

using Shape3 = std::array<std::size_t, 3>;

Shape3 padded(const std::vector<std::size_t>& shape) {
    Shape3 s{1, 1, 1};
    std::copy(shape.begin(), shape.end(), s.begin() + static_cast<std::ptrdiff_t>(3 - shape.size()));
    return s;
}

struct LineLayout {
    std::size_t outer;   // product of extents before the axis
    std::size_t length;  // extent of the axis
    std::size_t inner;   // product of extents after the axis (= stride)
    std::size_t lines() const { return outer * inner; }
    std::size_t base(std::size_t line) const {
        return (line / inner) * length * inner + line % inner;
    }
};

LineLayout layout(const DensityGrid& g, std::size_t axis) {
    if (axis >= g.dim()) throw Error(ErrorCode::BadParameters, "axis out of range");
    LineLayout l{1, g.shape()[axis], 1};
    for (std::size_t a = 0; a < axis; ++a) l.outer *= g.shape()[a];
    for (std::size_t a = axis + 1; a < g.dim(); ++a) l.inner *= g.shape()[a];
    return l;
}

void require_same_spacing(const DensityGrid& a, const DensityGrid& b) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "convolution operands");
    if (a.spacing() != b.spacing())
        throw Error(ErrorCode::DimensionMismatch, "convolution kernels need identical spacing");
}

// Placement of the rank-r value when the line has n cells.
std::size_t rank_position(std::size_t r, std::size_t n) {
    const std::size_t c = n / 2;
    if (r == 0) return c;
    return (r % 2 == 1) ? c - (r + 1) / 2 : c + r / 2;
}

}  // namespace

namespace kernels {

std::vector<double> convolve(const DensityGrid& a, const DensityGrid& b) {
    require_same_spacing(a, b);
    const Shape3 na = padded(a.shape());
    const Shape3 nb = padded(b.shape());
    const Shape3 no{na[0] + nb[0] - 1, na[1] + nb[1] - 1, na[2] + nb[2] - 1};
    const double vol = a.geometry().cell_volume();
    const auto av = a.values();
    const auto bv = b.values();
    std::vector<double> out(no[0] * no[1] * no[2], 0.0);

    const auto lo = [](std::size_t k, std::size_t nb_axis) -> std::size_t {
        return k + 1 > nb_axis ? k + 1 - nb_axis : 0;
    };

#pragma omp parallel for collapse(2) schedule(static)
    for (std::size_t k0 = 0; k0 < no[0]; ++k0) {
        for (std::size_t k1 = 0; k1 < no[1]; ++k1) {
            for (std::size_t k2 = 0; k2 < no[2]; ++k2) {
                double sum = 0.0;
                const std::size_t hi0 = std::min(na[0] - 1, k0);
                const std::size_t hi1 = std::min(na[1] - 1, k1);
                const std::size_t lo2 = lo(k2, nb[2]);
                const std::size_t hi2 = std::min(na[2] - 1, k2);
                for (std::size_t i0 = lo(k0, nb[0]); i0 <= hi0; ++i0) {
                    for (std::size_t i1 = lo(k1, nb[1]); i1 <= hi1; ++i1) {
                        const double* arow = av.data() + (i0 * na[1] + i1) * na[2];
                        const double* brow =
                            bv.data() + ((k0 - i0) * nb[1] + (k1 - i1)) * nb[2];
                        for (std::size_t i2 = lo2; i2 <= hi2; ++i2) sum += arow[i2] * brow[k2 - i2];
                    }
                }
                out[(k0 * no[1] + k1) * no[2] + k2] = sum * vol;
            }
        }
    }
    return out;
}

std::vector<double> rearrange_lines(const DensityGrid& g, std::size_t axis) {
    const LineLayout l = layout(g, axis);
    std::vector<double> out(g.size());
    const auto in = g.values();

#pragma omp parallel
    {
        std::vector<std::size_t> order(l.length);
#pragma omp for schedule(static)
        for (std::size_t line = 0; line < l.lines(); ++line) {
            const std::size_t base = l.base(line);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
                return in[base + i * l.inner] > in[base + j * l.inner];
            });
            // Walk outward from the centre, alternating below/above.
            std::size_t below = l.length / 2, above = l.length / 2;
            for (std::size_t r = 0; r < l.length; ++r) {
                std::size_t pos;
                if (r == 0) {
                    pos = below;
                } else if (r % 2 == 1) {
                    pos = --below;
                } else {
                    pos = ++above;
                }
                out[base + pos * l.inner] = in[base + order[r] * l.inner];
            }
        }
    }
    return out;
}

std::vector<double> resample(const DensityGrid& g, const Matrix& inv,
                             std::span<const double> offset, const GridGeometry& out,
                             double jacobian, std::size_t supersample) {
    const std::size_t d_out = out.dim();
    const std::size_t d_in = g.dim();
    const std::size_t n = out.size();
    const auto st = out.strides();
    const std::size_t s = std::max<std::size_t>(supersample, 1);
    std::size_t subs = 1;
    for (std::size_t a = 0; a < d_out; ++a) subs *= s;
    std::vector<double> values(n);

#pragma omp parallel
    {
        std::vector<double> centre(d_out), y(d_out), x(d_in);
#pragma omp for schedule(static)
        for (std::size_t flat = 0; flat < n; ++flat) {
            std::size_t rem = flat;
            for (std::size_t a = 0; a < d_out; ++a) {
                centre[a] = out.coordinate(a, rem / st[a]) - offset[a];
                rem %= st[a];
            }
            double acc = 0.0;
            for (std::size_t sub = 0; sub < subs; ++sub) {
                std::size_t code = sub;
                for (std::size_t a = d_out; a-- > 0;) {
                    const double j = static_cast<double>(code % s);
                    code /= s;
                    y[a] = centre[a] + ((j + 0.5) / static_cast<double>(s) - 0.5) * out.spacing[a];
                }
                for (std::size_t r = 0; r < d_in; ++r) {
                    double v = 0.0;
                    for (std::size_t c = 0; c < d_out; ++c) v += inv(r, c) * y[c];
                    x[r] = v;
                }
                acc += interpolate(g, x, EdgeRule::Ramp);
            }
            values[flat] = acc / static_cast<double>(subs) * jacobian;
        }
    }
    return values;
}

std::vector<double> sup_along_axis(const DensityGrid& g, std::size_t axis) {
    const LineLayout l = layout(g, axis);
    std::vector<double> out(l.lines());
    const auto in = g.values();
#pragma omp parallel for schedule(static)
    for (std::size_t line = 0; line < l.lines(); ++line) {
        const std::size_t base = l.base(line);
        double m = 0.0;
        for (std::size_t k = 0; k < l.length; ++k) m = std::max(m, in[base + k * l.inner]);
        out[line] = m;
    }
    return out;
}

}  // namespace kernels

namespace reference {

std::vector<double> convolve(const DensityGrid& a, const DensityGrid& b) {
    require_same_spacing(a, b);
    const std::size_t d = a.dim();
    std::vector<std::size_t> out_shape(d);
    for (std::size_t k = 0; k < d; ++k) out_shape[k] = a.shape()[k] + b.shape()[k] - 1;
    GridGeometry og{out_shape, std::vector<double>(d, 0.0), a.spacing()};
    const auto ost = og.strides();
    std::vector<double> out(og.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto ia = a.unravel(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const auto jb = b.unravel(j);
            std::size_t flat = 0;
            for (std::size_t k = 0; k < d; ++k) flat += (ia[k] + jb[k]) * ost[k];
            out[flat] += a[i] * b[j];
        }
    }
    const double vol = a.geometry().cell_volume();
    for (double& v : out) v *= vol;
    return out;
}

std::vector<double> rearrange_lines(const DensityGrid& g, std::size_t axis) {
    const LineLayout l = layout(g, axis);
    std::vector<double> out(g.size());
    for (std::size_t line = 0; line < l.lines(); ++line) {
        const std::size_t base = l.base(line);
        std::vector<std::pair<double, std::size_t>> entries;
        for (std::size_t k = 0; k < l.length; ++k) entries.emplace_back(g[base + k * l.inner], k);
        std::sort(entries.begin(), entries.end(), [](const auto& p, const auto& q) {
            return p.first != q.first ? p.first > q.first : p.second < q.second;
        });
        for (std::size_t r = 0; r < l.length; ++r)
            out[base + rank_position(r, l.length) * l.inner] = entries[r].first;
    }
    return out;
}

std::vector<double> resample(const DensityGrid& g, const Matrix& inv,
                             std::span<const double> offset, const GridGeometry& out,
                             double jacobian, std::size_t supersample) {
    const std::size_t d = out.dim();
    const std::size_t s = std::max<std::size_t>(supersample, 1);
    std::size_t subs = 1;
    for (std::size_t a = 0; a < d; ++a) subs *= s;
    std::vector<double> values(out.size());
    const DensityGrid shape_only(out, std::vector<double>(out.size(), 0.0));
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        const auto centre = shape_only.point(flat);
        double acc = 0.0;
        for (std::size_t sub = 0; sub < subs; ++sub) {
            std::vector<double> y(d);
            std::size_t code = sub;
            for (std::size_t a = d; a-- > 0;) {
                const double j = static_cast<double>(code % s);
                code /= s;
                y[a] = centre[a] - offset[a] + ((j + 0.5) / static_cast<double>(s) - 0.5) * out.spacing[a];
            }
            acc += interpolate(g, logcone::apply(inv, y), EdgeRule::Ramp);
        }
        values[flat] = acc / static_cast<double>(subs) * jacobian;
    }
    return values;
}

std::vector<double> sup_along_axis(const DensityGrid& g, std::size_t axis) {
    const LineLayout l = layout(g, axis);
    std::vector<double> out(l.lines(), 0.0);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const std::size_t line = (flat / (l.length * l.inner)) * l.inner + flat % l.inner;
        out[line] = std::max(out[line], g[flat]);
    }
    return out;
}

}  // namespace reference

}  // namespace logcone
