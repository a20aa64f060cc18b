#include "efmhd/spatial_rhs.hpp"

#include <cmath>
#include <string>

#include "efmhd/parallel.hpp"

namespace efmhd {

SpatialOperator::SpatialOperator(const ReferenceElement& re, const StructuredMesh& mesh, GasModel gas,
                                 RiemannSolver solver)
    : re_(re), mesh_(mesh), gas_(gas), solver_(solver) {
  if (re.dim != mesh.dim) throw std::invalid_argument("SpatialOperator: element and mesh dimension differ");
  diff_.resize(static_cast<std::size_t>(re.n1d * re.n1d));
  for (int i = 0; i < re.n1d; ++i) {
    for (int m = 0; m < re.n1d; ++m) diff_[i * re.n1d + m] = re.diff_1d(i, m);
  }
  const int ne = mesh.num_elements();
  elem_faces_.assign(static_cast<std::size_t>(ne * 4), -1);
  for (int e = 0; e < ne; ++e) {
    for (int a = 0; a < mesh.dim; ++a) {
      const FaceNeighbor lo = mesh.connectivity[e][2 * a];
      const FaceNeighbor hi = mesh.connectivity[e][2 * a + 1];
      if (lo.is_boundary()) {
        elem_faces_[e * 4 + 2 * a] = static_cast<int>(faces_.size());
        faces_.push_back({-1, e, a, lo.boundary_side});
      }
      elem_faces_[e * 4 + 2 * a + 1] = static_cast<int>(faces_.size());
      if (hi.is_boundary()) {
        faces_.push_back({e, -1, a, hi.boundary_side});
      } else {
        faces_.push_back({e, hi.element, a, -1});
        elem_faces_[hi.element * 4 + 2 * a] = elem_faces_[e * 4 + 2 * a + 1];
      }
    }
  }
}

void SpatialOperator::gather_traces(const Field& u, TraceBuffer& tb) const {
  const int npf = re_.nodes_per_face;
  const auto nf = faces_.size() * static_cast<std::size_t>(npf);
  tb.nodes_per_face = npf;
  tb.left.resize(nf);
  tb.right.resize(nf);
  tb.flux.resize(nf);
  tb.common_B.resize(nf);

  parallel_for(static_cast<int>(faces_.size()), [&](int f) {
    const InterfaceFace& face = faces_[f];
    const Vec3 normal = axis_normal(face.axis);
    for (int t = 0; t < npf; ++t) {
      const std::size_t k = static_cast<std::size_t>(f * npf + t);
      ConservedState ul, ur;
      if (face.left >= 0) ul = u.at(face.left, re_.face_nodes[2 * face.axis + 1][t]);
      if (face.right >= 0) ur = u.at(face.right, re_.face_nodes[2 * face.axis][t]);
      if (face.left < 0) ul = ghost_state(ur, mesh_.bcs.sides[face.boundary_side], -normal, gas_);
      if (face.right < 0) ur = ghost_state(ul, mesh_.bcs.sides[face.boundary_side], normal, gas_);
      tb.left[k] = ul;
      tb.right[k] = ur;
      const RiemannInput in{ul, ur, normal};
      try {
        tb.flux[k] = ul == ur ? normal_flux(ul, normal, gas_) : numerical_flux(solver_, in, gas_);
      } catch (const InvalidStateError& err) {
        throw InvalidStateError(std::string(err.what()) + " [face " + std::to_string(f) + " between elements " +
                                std::to_string(face.left) + " and " + std::to_string(face.right) + ", node " +
                                std::to_string(t) + "]");
      }
      tb.common_B[k] = interface_B_average(in);
    }
  });
}

void SpatialOperator::assemble(const Field& u, const TraceBuffer& tb, Field* rhs, std::vector<double>* divB) const {
  const int n = re_.n1d;
  const int N = re_.num_nodes;
  const int dim = re_.dim;
  const int npf = re_.nodes_per_face;
  const int lines = dim == 1 ? 1 : n;
  const double* D = diff_.data();
  const double* gl = re_.lift_left_1d.data();
  const double* gr = re_.lift_right_1d.data();

  parallel_for(mesh_.num_elements(), [&](int e) {
    const auto ue = u.element(e);
    thread_local std::vector<ConservedState> flux;
    flux.resize(static_cast<std::size_t>(N * dim));
    ConservedState* out = rhs ? rhs->element(e).data() : nullptr;
    double* dout = divB ? divB->data() + static_cast<std::ptrdiff_t>(e) * N : nullptr;

    if (out) {
      for (int k = 0; k < N; ++k) {
        for (int a = 0; a < dim; ++a) flux[a * N + k] = axis_flux(ue[k], a, gas_);
        out[k] = ConservedState{};
      }
    }
    if (dout) {
      for (int k = 0; k < N; ++k) dout[k] = 0.0;
    }

    for (int a = 0; a < dim; ++a) {
      const double scale = 2.0 / mesh_.h[a];
      const int f_lo = face_of(e, 2 * a);
      const int f_hi = face_of(e, 2 * a + 1);
      // Along axis a the nodes of line l are base + m * stride, m = 0..n-1.
      const int stride = a == 0 ? 1 : n;
      for (int l = 0; l < lines; ++l) {
        const int base = a == 0 ? l * n : l;
        const int k_lo = base;
        const int k_hi = base + (n - 1) * stride;
        const std::size_t s_lo = static_cast<std::size_t>(f_lo * npf + l);
        const std::size_t s_hi = static_cast<std::size_t>(f_hi * npf + l);

        if (out) {
          const ConservedState* fa = flux.data() + a * N;
          double jl[kNumFields], jr[kNumFields];
          for (int c = 0; c < kNumFields; ++c) {
            jl[c] = tb.flux[s_lo][c] - fa[k_lo][c];
            jr[c] = tb.flux[s_hi][c] - fa[k_hi][c];
          }
          for (int i = 0; i < n; ++i) {
            double div[kNumFields];
            for (int c = 0; c < kNumFields; ++c) div[c] = jl[c] * gl[i] + jr[c] * gr[i];
            const double* Di = D + i * n;
            for (int m = 0; m < n; ++m) {
              const double d = Di[m];
              const ConservedState& fm = fa[base + m * stride];
              for (int c = 0; c < kNumFields; ++c) div[c] += d * fm[c];
            }
            ConservedState& o = out[base + i * stride];
            for (int c = 0; c < kNumFields; ++c) o[c] -= scale * div[c];
          }
        }
        if (dout) {
          const double bl = tb.common_B[s_lo][a] - ue[k_lo][kBx + a];
          const double br = tb.common_B[s_hi][a] - ue[k_hi][kBx + a];
          for (int i = 0; i < n; ++i) {
            double div = bl * gl[i] + br * gr[i];
            const double* Di = D + i * n;
            for (int m = 0; m < n; ++m) div += Di[m] * ue[base + m * stride][kBx + a];
            dout[base + i * stride] += scale * div;
          }
        }
      }
    }
  });
}

void SpatialOperator::compute_L1(const Field& u, Field& rhs) const {
  gather_traces(u, traces_);
  if (rhs.num_elements() != u.num_elements() || rhs.nodes_per_element() != u.nodes_per_element()) {
    rhs = Field(u.num_elements(), u.nodes_per_element());
  }
  assemble(u, traces_, &rhs, nullptr);
}

void SpatialOperator::compute_global_divB(const Field& u, std::vector<double>& divB) const {
  gather_traces(u, traces_);
  divB.resize(u.size());
  assemble(u, traces_, nullptr, &divB);
}

void SpatialOperator::compute_L1_and_divB(const Field& u, Field& rhs, std::vector<double>& divB) const {
  gather_traces(u, traces_);
  if (rhs.num_elements() != u.num_elements() || rhs.nodes_per_element() != u.nodes_per_element()) {
    rhs = Field(u.num_elements(), u.nodes_per_element());
  }
  divB.resize(u.size());
  assemble(u, traces_, &rhs, &divB);
}

double SpatialOperator::divB_l1_norm(std::span<const double> divB) const {
  const int N = re_.num_nodes;
  const double jac = mesh_.volume() / re_.reference_volume();
  double total = 0.0;
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    for (int k = 0; k < N; ++k) total += re_.weights[k] * std::abs(divB[static_cast<std::size_t>(e * N + k)]);
  }
  return total * jac;
}

void compute_L2(const Field& u, std::span<const double> divB, Field& out) {
  if (out.size() != u.size()) out = Field(u.num_elements(), u.nodes_per_element());
  const int N = u.nodes_per_element();
  parallel_for(u.num_elements(), [&](int e) {
    const auto ue = u.element(e);
    auto oe = out.element(e);
    for (int k = 0; k < N; ++k) oe[k] = powell_source(ue[k], divB[static_cast<std::size_t>(e * N + k)]);
  });
}

}  // namespace efmhd
