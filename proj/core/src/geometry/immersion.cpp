#include "smot/geometry/immersion.hpp"

#include <iomanip>
#include <sstream>

#include "smot/geometry/subspace.hpp"

namespace smot {
namespace {

std::string describe_cell(std::span<const int> idx, std::span<const double> s) {
  std::ostringstream os;
  os << "cell [";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ", " : "") << idx[i];
  os << "] at parameters (";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : "") << s[i];
  os << ")";
  return os.str();
}

// Partial along `axis` at a point on one of its faces, with the second-order
// one-sided stencil pointing into the box.
Vec one_sided_partial(const ParametricChart& chart, std::vector<double> s, int axis, bool at_hi) {
  const double h = chart.fd_step(axis);
  const double dir = at_hi ? -1.0 : 1.0;
  const auto a = static_cast<std::size_t>(axis);
  const double s0 = s[a];
  const Vec f0 = evaluate_chart(chart, s);
  s[a] = s0 + dir * h;
  const Vec f1 = evaluate_chart(chart, s);
  s[a] = s0 + 2.0 * dir * h;
  const Vec f2 = evaluate_chart(chart, s);
  return dir * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
}

void add_face(const ParametricChart& chart, int axis, bool at_hi, const AmbientMetric* metric,
              std::vector<BoundarySample>& out) {
  const int n = chart.dim();
  std::vector<int> extents;
  std::vector<int> others;
  for (int b = 0; b < n; ++b) {
    if (b == axis) continue;
    others.push_back(b);
    extents.push_back(chart.axes[static_cast<std::size_t>(b)].resolution);
  }
  double face_cell = 1.0;
  for (int b : others) face_cell *= chart.cell_size(b);
  const AxisSpec& ax = chart.axes[static_cast<std::size_t>(axis)];

  for_each_index(extents, [&](std::span<const int> sub) {
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < others.size(); ++i) idx[static_cast<std::size_t>(others[i])] = sub[i];
    std::vector<double> s = chart.node_params(idx);
    s[static_cast<std::size_t>(axis)] = at_hi ? ax.hi : ax.lo;

    std::vector<double> steps(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) steps[static_cast<std::size_t>(b)] = chart.fd_step(b);

    // Tangents of the face: central differences along the other axes.
    Mat face_tangents(chart.ambient_dim, static_cast<Eigen::Index>(others.size()));
    for (std::size_t i = 0; i < others.size(); ++i) {
      const auto b = static_cast<std::size_t>(others[i]);
      std::vector<double> sp = s;
      std::vector<double> sm = s;
      sp[b] += steps[b];
      sm[b] -= steps[b];
      face_tangents.col(static_cast<Eigen::Index>(i)) =
          (evaluate_chart(chart, sp) - evaluate_chart(chart, sm)) / (2.0 * steps[b]);
    }
    const Vec transverse = one_sided_partial(chart, s, axis, at_hi);

    BoundarySample sample;
    sample.point = evaluate_chart(chart, s);
    // With a metric g = U^T U, work in the Euclidean picture v -> U v.
    Mat u_factor = Mat::Identity(chart.ambient_dim, chart.ambient_dim);
    if (metric) u_factor = (*metric)(sample.point).llt().matrixU();
    face_tangents = u_factor * face_tangents;
    Vec nu = u_factor * transverse;
    double face_det = 1.0;
    if (face_tangents.cols() > 0) {
      const Mat gram = face_tangents.transpose() * face_tangents;
      face_det = gram.determinant();
      if (!(face_det > 1e-12)) {
        throw Error("sample_immersion: degenerate boundary metric at " + describe_cell(idx, s) +
                    "; mark the face Collapsed if it is not a boundary");
      }
      const Mat q = orthonormalize_columns(face_tangents);
      nu -= q * (q.transpose() * nu);
    }
    const double len = nu.norm();
    if (!(len > 1e-12)) throw Error("sample_immersion: boundary conormal vanishes at " + describe_cell(idx, s));
    sample.conormal = u_factor.triangularView<Eigen::Upper>().solve((at_hi ? 1.0 : -1.0) * nu / len);
    sample.weight = std::sqrt(face_det) * face_cell;
    out.push_back(std::move(sample));
  });
}

}  // namespace

double SampledImmersion::boundary_volume() const {
  double total = 0.0;
  for (const BoundarySample& b : boundary) total += b.weight;
  return total;
}

SampledImmersion SampledImmersion::rotated(const Mat& q) const {
  if (q.rows() != ambient_dim || q.cols() != ambient_dim) {
    throw Error("SampledImmersion::rotated: rotation has wrong shape");
  }
  SampledImmersion r = *this;
  r.points = q * points;
  r.mean_curvature = q * mean_curvature;
  for (std::size_t j = 0; j < size(); ++j) {
    r.tangent_frames[j] = q * tangent_frames[j];
    r.partials[j] = q * partials[j];
  }
  for (BoundarySample& b : r.boundary) {
    b.point = q * b.point;
    b.conormal = q * b.conormal;
  }
  if (chart) {
    auto moved = std::make_shared<ParametricChart>(*chart);
    ChartMap inner = chart->map;
    Mat qq = q;
    moved->map = [inner, qq](std::span<const double> s) -> Vec { return qq * inner(s); };
    r.chart = std::move(moved);
  }
  return r;
}

SampledImmersion sample_immersion(const ParametricChart& chart, SurfaceInfo info) {
  chart.validate();
  const int n = chart.dim();
  const int d = chart.ambient_dim;
  const std::size_t count = chart.node_count();

  SampledImmersion m;
  m.ambient_dim = d;
  m.intrinsic_dim = n;
  m.points.resize(d, static_cast<Eigen::Index>(count));
  m.mean_curvature.resize(d, static_cast<Eigen::Index>(count));
  m.weights.resize(static_cast<Eigen::Index>(count));
  m.params.resize(n, static_cast<Eigen::Index>(count));
  m.tangent_frames.reserve(count);
  m.partials.reserve(count);
  m.metric.reserve(count);
  m.surface = std::move(info);
  for (const AxisSpec& a : chart.axes) m.resolution.push_back(a.resolution);
  m.chart = std::make_shared<ParametricChart>(chart);

  const double cell = chart.cell_volume();
  std::vector<int> extents(m.resolution);
  Eigen::Index j = 0;
  for_each_index(extents, [&](std::span<const int> idx) {
    const std::vector<double> s = chart.node_params(idx);
    const ChartDerivatives der = chart_derivatives(chart, s);
    const Mat g = der.partials.transpose() * der.partials;
    const double det = g.determinant();
    if (!(det > 1e-12)) {
      throw Error("sample_immersion: degenerate induced metric (Gram determinant " + std::to_string(det) +
                  ") at " + describe_cell(idx, s));
    }
    const Mat frame = orthonormalize_columns(der.partials);
    const Mat ginv = g.inverse();
    Vec trace = Vec::Zero(d);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) trace += ginv(a, b) * der.second[static_cast<std::size_t>(a)].col(b);
    }
    const Vec normal_part = trace - frame * (frame.transpose() * trace);

    m.points.col(j) = der.position;
    m.mean_curvature.col(j) = normal_part / n;
    m.weights(j) = std::sqrt(det) * cell;
    for (int a = 0; a < n; ++a) m.params(a, j) = s[static_cast<std::size_t>(a)];
    m.tangent_frames.push_back(frame);
    m.partials.push_back(der.partials);
    m.metric.push_back(g);
    ++j;
  });

  m.boundary = sample_boundary(chart);
  return m;
}

std::vector<BoundarySample> sample_boundary(const ParametricChart& chart, const AmbientMetric* metric) {
  std::vector<BoundarySample> out;
  for (int a = 0; a < chart.dim(); ++a) {
    const AxisSpec& ax = chart.axes[static_cast<std::size_t>(a)];
    if (ax.lo_face == FaceKind::Boundary) add_face(chart, a, false, metric, out);
    if (ax.hi_face == FaceKind::Boundary) add_face(chart, a, true, metric, out);
  }
  return out;
}

void write_immersion_csv(std::ostream& out, const SampledImmersion& m) {
  const int d = m.ambient_dim;
  const int n = m.intrinsic_dim;
  out << "point_id";
  for (int i = 0; i < d; ++i) out << ",x" << i;
  out << ",weight";
  for (int i = 0; i < d; ++i) out << ",H" << i;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < n; ++c) out << ",frame_" << r << "_" << c;
  }
  out << "\n" << std::setprecision(17);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out << j;
    for (int i = 0; i < d; ++i) out << "," << m.points(i, jj);
    out << "," << m.weights(jj);
    for (int i = 0; i < d; ++i) out << "," << m.mean_curvature(i, jj);
    const Mat& f = m.tangent_frames[j];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < n; ++c) out << "," << f(r, c);
    }
    out << "\n";
  }
}

}  // namespace smot
