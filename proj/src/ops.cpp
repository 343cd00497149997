#include "gg/ops.hpp"

#include <cmath>

#include "gg/kernels.hpp"

namespace gg {
namespace {

using ImplPtr = std::shared_ptr<Tensor::Impl>;

bool recording(std::initializer_list<const Tensor*> inputs) {
  if (!Tape::current()) return false;
  for (const Tensor* t : inputs)
    if (t->requires_grad()) return true;
  return false;
}

void accumulate(const ImplPtr& impl, const double* g, size_t n) {
  auto& dst = Tensor::ensure_grad(impl);
  kernels::active().add(dst.data(), g, dst.data(), n);
}

const std::vector<double>* out_grad(const ImplPtr& oi) {
  return oi->grad ? oi->grad.get() : nullptr;
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error(op, a.shape(), b.shape());
}

Tensor binary_elemwise(const char* name, const Tensor& a, const Tensor& b,
                       void (*fwd)(const double*, const double*, double*,
                                   size_t),
                       int mode /*0=add,1=sub,2=mul*/) {
  check_same_shape(name, a, b);
  Tensor out = Tensor::zeros(a.shape());
  size_t n = a.size();
  fwd(a.data(), b.data(), out.mutable_data(), n);
  if (recording({&a, &b})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), bi = b.impl(), oi = out.impl(),
                             mode, n] {
      const auto* g = out_grad(oi);
      if (!g) return;
      const auto& k = kernels::active();
      if (mode == 2) {
        if (ai->requires_grad) {
          std::vector<double> tmp(n);
          k.mul(g->data(), bi->data.data(), tmp.data(), n);
          accumulate(ai, tmp.data(), n);
        }
        if (bi->requires_grad) {
          std::vector<double> tmp(n);
          k.mul(g->data(), ai->data.data(), tmp.data(), n);
          accumulate(bi, tmp.data(), n);
        }
      } else {
        if (ai->requires_grad) accumulate(ai, g->data(), n);
        if (bi->requires_grad) {
          if (mode == 0) {
            accumulate(bi, g->data(), n);
          } else {
            auto& dst = Tensor::ensure_grad(bi);
            k.axpy(-1.0, g->data(), dst.data(), n);
          }
        }
      }
    });
  }
  return out;
}

Tensor unary_elemwise(const Tensor& a, double (*f)(double),
                      double (*df)(double)) {
  Tensor out = Tensor::zeros(a.shape());
  size_t n = a.size();
  const double* x = a.data();
  double* y = out.mutable_data();
  for (size_t i = 0; i < n; ++i) y[i] = f(x[i]);
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), df, n] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      const double* x = ai->data.data();
      for (size_t i = 0; i < n; ++i) dst[i] += (*g)[i] * df(x[i]);
    });
  }
  return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

constexpr double kInvSqrt2 = 0.7071067811865476;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_elemwise("add", a, b, kernels::active().add, 0);
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_elemwise("sub", a, b, kernels::active().sub, 1);
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_elemwise("mul", a, b, kernels::active().mul, 2);
}

Tensor scale(const Tensor& a, double c) {
  Tensor out = Tensor::zeros(a.shape());
  kernels::active().scale(a.data(), c, out.mutable_data(), a.size());
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      kernels::active().axpy(c, g->data(), dst.data(), g->size());
    });
  }
  return out;
}

Tensor add_scalar(const Tensor& a, double c) {
  Tensor out = Tensor::zeros(a.shape());
  const double* x = a.data();
  double* y = out.mutable_data();
  for (size_t i = 0; i < a.size(); ++i) y[i] = x[i] + c;
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl()] {
      const auto* g = out_grad(oi);
      if (!g) return;
      accumulate(ai, g->data(), g->size());
    });
  }
  return out;
}

Tensor sqrt_elem(const Tensor& a) {
  for (size_t i = 0; i < a.size(); ++i)
    require(a.data()[i] >= 0.0, "sqrt_elem: negative input");
  Tensor out = Tensor::zeros(a.shape());
  const double* x = a.data();
  double* y = out.mutable_data();
  for (size_t i = 0; i < a.size(); ++i) y[i] = std::sqrt(x[i]);
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl()] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      const auto& y = oi->data;
      for (size_t i = 0; i < y.size(); ++i) dst[i] += (*g)[i] * 0.5 / y[i];
    });
  }
  return out;
}

Tensor silu(const Tensor& a) {
  return unary_elemwise(
      a, [](double x) { return x * sigmoid(x); },
      [](double x) {
        double s = sigmoid(x);
        return s * (1.0 + x * (1.0 - s));
      });
}

Tensor gelu(const Tensor& a) {
  return unary_elemwise(
      a, [](double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); },
      [](double x) {
        return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) +
               x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
      });
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  require(a.ndim() == 2 && b.ndim() == 2, "matmul: inputs must be 2-d");
  if (a.cols() != b.rows()) shape_error("matmul", a.shape(), b.shape());
  const size_t m = a.rows(), k = a.cols(), n = b.cols();
  Tensor out = Tensor::zeros({a.rows(), b.cols()});
  kernels::active().matmul(a.data(), b.data(), out.mutable_data(), m, k, n);
  if (recording({&a, &b})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), bi = b.impl(), oi = out.impl(), m,
                             k, n] {
      const auto* g = out_grad(oi);
      if (!g) return;
      const auto& ker = kernels::active();
      if (ai->requires_grad) {  // dA = dC * B^T
        std::vector<double> tmp(m * k);
        ker.matmul_nt(g->data(), bi->data.data(), tmp.data(), m, n, k);
        accumulate(ai, tmp.data(), tmp.size());
      }
      if (bi->requires_grad) {  // dB = A^T * dC
        std::vector<double> tmp(k * n);
        ker.matmul_tn(ai->data.data(), g->data(), tmp.data(), k, m, n);
        accumulate(bi, tmp.data(), tmp.size());
      }
    });
  }
  return out;
}

namespace {
void transpose_into(const double* src, double* dst, int r, int c) {
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) dst[j * r + i] = src[i * c + j];
}
}  // namespace

Tensor transpose(const Tensor& a) {
  require(a.ndim() == 2, "transpose: input must be 2-d");
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros({c, r});
  transpose_into(a.data(), out.mutable_data(), r, c);
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), r, c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      std::vector<double> tmp(static_cast<size_t>(r) * c);
      transpose_into(g->data(), tmp.data(), c, r);
      accumulate(ai, tmp.data(), tmp.size());
    });
  }
  return out;
}

Tensor reshape(const Tensor& a, std::vector<int> new_shape) {
  require(shape_numel(new_shape) == a.size(),
          "reshape: element count mismatch " + shape_str(a.shape()) + " -> " +
              shape_str(new_shape));
  Tensor out = Tensor::from_data(std::move(new_shape), a.vec());
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl()] {
      const auto* g = out_grad(oi);
      if (!g) return;
      accumulate(ai, g->data(), g->size());
    });
  }
  return out;
}

Tensor concat_rows(const std::vector<Tensor>& parts) {
  require(!parts.empty(), "concat_rows: empty input list");
  const int c = parts[0].cols();
  int total = 0;
  for (const auto& p : parts) {
    require(p.ndim() == 2 && p.cols() == c,
            "concat_rows: column mismatch " + shape_str(p.shape()));
    total += p.rows();
  }
  Tensor out = Tensor::zeros({total, c});
  double* dst = out.mutable_data();
  size_t off = 0;
  bool any_grad = false;
  for (const auto& p : parts) {
    std::copy(p.data(), p.data() + p.size(), dst + off);
    off += p.size();
    any_grad = any_grad || p.requires_grad();
  }
  if (Tape::current() && any_grad) {
    out.set_requires_grad(true);
    std::vector<ImplPtr> impls;
    for (const auto& p : parts) impls.push_back(p.impl());
    Tape::current()->record([impls, oi = out.impl()] {
      const auto* g = out_grad(oi);
      if (!g) return;
      size_t off = 0;
      for (const auto& pi : impls) {
        if (pi->requires_grad) accumulate(pi, g->data() + off, pi->data.size());
        off += pi->data.size();
      }
    });
  }
  return out;
}

Tensor slice_rows(const Tensor& a, int r0, int r1) {
  require(a.ndim() == 2 && 0 <= r0 && r0 < r1 && r1 <= a.rows(),
          "slice_rows: bad range [" + std::to_string(r0) + "," +
              std::to_string(r1) + ") for " + shape_str(a.shape()));
  const int c = a.cols();
  Tensor out = Tensor::zeros({r1 - r0, c});
  std::copy(a.data() + static_cast<size_t>(r0) * c,
            a.data() + static_cast<size_t>(r1) * c, out.mutable_data());
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), r0, c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      kernels::active().add(dst.data() + static_cast<size_t>(r0) * c,
                            g->data(),
                            dst.data() + static_cast<size_t>(r0) * c,
                            g->size());
    });
  }
  return out;
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  require(!parts.empty(), "concat_cols: empty input list");
  const int r = parts[0].rows();
  int total = 0;
  for (const auto& p : parts) {
    require(p.ndim() == 2 && p.rows() == r,
            "concat_cols: row mismatch " + shape_str(p.shape()));
    total += p.cols();
  }
  Tensor out = Tensor::zeros({r, total});
  double* dst = out.mutable_data();
  bool any_grad = false;
  int col_off = 0;
  for (const auto& p : parts) {
    const int pc = p.cols();
    for (int i = 0; i < r; ++i)
      std::copy(p.data() + static_cast<size_t>(i) * pc,
                p.data() + static_cast<size_t>(i + 1) * pc,
                dst + static_cast<size_t>(i) * total + col_off);
    col_off += pc;
    any_grad = any_grad || p.requires_grad();
  }
  if (Tape::current() && any_grad) {
    out.set_requires_grad(true);
    std::vector<ImplPtr> impls;
    for (const auto& p : parts) impls.push_back(p.impl());
    Tape::current()->record([impls, oi = out.impl(), r, total] {
      const auto* g = out_grad(oi);
      if (!g) return;
      int col_off = 0;
      for (const auto& pi : impls) {
        const int pc = pi->shape[1];
        if (pi->requires_grad) {
          auto& dst = Tensor::ensure_grad(pi);
          for (int i = 0; i < r; ++i)
            for (int j = 0; j < pc; ++j)
              dst[static_cast<size_t>(i) * pc + j] +=
                  (*g)[static_cast<size_t>(i) * total + col_off + j];
        }
        col_off += pc;
      }
    });
  }
  return out;
}

Tensor slice_cols(const Tensor& a, int c0, int c1) {
  require(a.ndim() == 2 && 0 <= c0 && c0 < c1 && c1 <= a.cols(),
          "slice_cols: bad range [" + std::to_string(c0) + "," +
              std::to_string(c1) + ") for " + shape_str(a.shape()));
  const int r = a.rows(), c = a.cols(), w = c1 - c0;
  Tensor out = Tensor::zeros({r, w});
  double* dst = out.mutable_data();
  for (int i = 0; i < r; ++i)
    std::copy(a.data() + static_cast<size_t>(i) * c + c0,
              a.data() + static_cast<size_t>(i) * c + c1,
              dst + static_cast<size_t>(i) * w);
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), r, c, c0, w] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < w; ++j)
          dst[static_cast<size_t>(i) * c + c0 + j] +=
              (*g)[static_cast<size_t>(i) * w + j];
    });
  }
  return out;
}

Tensor add_rowvec(const Tensor& a, const Tensor& v) {
  require(a.ndim() == 2 && static_cast<int>(v.size()) == a.cols(),
          "add_rowvec: vector length " + std::to_string(v.size()) +
              " vs " + shape_str(a.shape()));
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  double* y = out.mutable_data();
  for (int i = 0; i < r; ++i)
    kernels::active().add(a.data() + static_cast<size_t>(i) * c, v.data(),
                          y + static_cast<size_t>(i) * c, c);
  if (recording({&a, &v})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), vi = v.impl(), oi = out.impl(), r,
                             c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      if (ai->requires_grad) accumulate(ai, g->data(), g->size());
      if (vi->requires_grad) {
        auto& dst = Tensor::ensure_grad(vi);
        for (int i = 0; i < r; ++i)
          kernels::active().add(dst.data(),
                                g->data() + static_cast<size_t>(i) * c,
                                dst.data(), c);
      }
    });
  }
  return out;
}

Tensor mul_rowvec(const Tensor& a, const Tensor& v) {
  require(a.ndim() == 2 && static_cast<int>(v.size()) == a.cols(),
          "mul_rowvec: vector length " + std::to_string(v.size()) +
              " vs " + shape_str(a.shape()));
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  double* y = out.mutable_data();
  for (int i = 0; i < r; ++i)
    kernels::active().mul(a.data() + static_cast<size_t>(i) * c, v.data(),
                          y + static_cast<size_t>(i) * c, c);
  if (recording({&a, &v})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), vi = v.impl(), oi = out.impl(), r,
                             c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      const auto& k = kernels::active();
      if (ai->requires_grad) {
        auto& dst = Tensor::ensure_grad(ai);
        std::vector<double> tmp(c);
        for (int i = 0; i < r; ++i) {
          const size_t off = static_cast<size_t>(i) * c;
          k.mul(g->data() + off, vi->data.data(), tmp.data(), c);
          k.add(dst.data() + off, tmp.data(), dst.data() + off, c);
        }
      }
      if (vi->requires_grad) {
        auto& dst = Tensor::ensure_grad(vi);
        std::vector<double> tmp(c);
        for (int i = 0; i < r; ++i) {
          const size_t off = static_cast<size_t>(i) * c;
          k.mul(g->data() + off, ai->data.data() + off, tmp.data(), c);
          k.add(dst.data(), tmp.data(), dst.data(), c);
        }
      }
    });
  }
  return out;
}

Tensor mul_colvec(const Tensor& a, const Tensor& u) {
  require(a.ndim() == 2 && static_cast<int>(u.size()) == a.rows(),
          "mul_colvec: vector length " + std::to_string(u.size()) +
              " vs " + shape_str(a.shape()));
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  double* y = out.mutable_data();
  for (int i = 0; i < r; ++i)
    kernels::active().scale(a.data() + static_cast<size_t>(i) * c, u.data()[i],
                            y + static_cast<size_t>(i) * c, c);
  if (recording({&a, &u})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), ui = u.impl(), oi = out.impl(), r,
                             c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      const auto& k = kernels::active();
      if (ai->requires_grad) {
        auto& dst = Tensor::ensure_grad(ai);
        for (int i = 0; i < r; ++i)
          k.axpy(ui->data[i], g->data() + static_cast<size_t>(i) * c,
                 dst.data() + static_cast<size_t>(i) * c, c);
      }
      if (ui->requires_grad) {
        auto& dst = Tensor::ensure_grad(ui);
        for (int i = 0; i < r; ++i)
          dst[i] += k.dot(g->data() + static_cast<size_t>(i) * c,
                          ai->data.data() + static_cast<size_t>(i) * c, c);
      }
    });
  }
  return out;
}

Tensor sum_all(const Tensor& a) {
  Tensor out = Tensor::scalar(kernels::active().sum(a.data(), a.size()));
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl()] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      const double gv = (*g)[0];
      for (auto& d : dst) d += gv;
    });
  }
  return out;
}

Tensor sum_cols(const Tensor& a) {
  require(a.ndim() == 2, "sum_cols: input must be 2-d");
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros({r, 1});
  for (int i = 0; i < r; ++i)
    out.mutable_data()[i] =
        kernels::active().sum(a.data() + static_cast<size_t>(i) * c, c);
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), r, c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      for (int i = 0; i < r; ++i) {
        const double gv = (*g)[i];
        double* row = dst.data() + static_cast<size_t>(i) * c;
        for (int j = 0; j < c; ++j) row[j] += gv;
      }
    });
  }
  return out;
}

Tensor mean_all(const Tensor& a) {
  return scale(sum_all(a), 1.0 / static_cast<double>(a.size()));
}

Tensor mean_square(const Tensor& a) {
  return scale(sum_all(mul(a, a)), 1.0 / static_cast<double>(a.size()));
}

Tensor layer_norm(const Tensor& a, double eps) {
  require(a.ndim() == 2, "layer_norm: input must be 2-d");
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  auto rstd = std::make_shared<std::vector<double>>(r);
  auto mean = std::make_shared<std::vector<double>>(r);
  const auto& k = kernels::active();
  for (int i = 0; i < r; ++i) {
    const double* x = a.data() + static_cast<size_t>(i) * c;
    double* y = out.mutable_data() + static_cast<size_t>(i) * c;
    const double m = k.sum(x, c) / c;
    double var = 0.0;
    for (int j = 0; j < c; ++j) var += (x[j] - m) * (x[j] - m);
    var /= c;
    const double rs = 1.0 / std::sqrt(var + eps);
    (*mean)[i] = m;
    (*rstd)[i] = rs;
    for (int j = 0; j < c; ++j) y[j] = (x[j] - m) * rs;
  }
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), mean, rstd, r,
                             c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      for (int i = 0; i < r; ++i) {
        const size_t off = static_cast<size_t>(i) * c;
        const double* gi = g->data() + off;
        const double* yi = oi->data.data() + off;
        double gmean = 0.0, gymean = 0.0;
        for (int j = 0; j < c; ++j) {
          gmean += gi[j];
          gymean += gi[j] * yi[j];
        }
        gmean /= c;
        gymean /= c;
        const double rs = (*rstd)[i];
        for (int j = 0; j < c; ++j)
          dst[off + j] += rs * (gi[j] - gmean - yi[j] * gymean);
      }
    });
  }
  return out;
}

Tensor rms_norm(const Tensor& a, double eps) {
  require(a.ndim() == 2, "rms_norm: input must be 2-d");
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  auto rms = std::make_shared<std::vector<double>>(r);
  const auto& k = kernels::active();
  for (int i = 0; i < r; ++i) {
    const double* x = a.data() + static_cast<size_t>(i) * c;
    const double inv = 1.0 / std::sqrt(k.sumsq(x, c) / c + eps);
    (*rms)[i] = inv;
    k.scale(x, inv, out.mutable_data() + static_cast<size_t>(i) * c, c);
  }
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), rms, r, c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      const auto& k = kernels::active();
      for (int i = 0; i < r; ++i) {
        const size_t off = static_cast<size_t>(i) * c;
        const double* gi = g->data() + off;
        const double* xi = ai->data.data() + off;
        const double inv = (*rms)[i];
        const double gx = k.dot(gi, xi, c);
        const double coef = inv * inv * inv * gx / c;
        for (int j = 0; j < c; ++j) dst[off + j] += inv * gi[j] - coef * xi[j];
      }
    });
  }
  return out;
}

Tensor softmax_rows(const Tensor& a) {
  require(a.ndim() == 2, "softmax_rows: input must be 2-d");
  const int r = a.rows(), c = a.cols();
  Tensor out = Tensor::zeros(a.shape());
  for (int i = 0; i < r; ++i) {
    const double* x = a.data() + static_cast<size_t>(i) * c;
    double* y = out.mutable_data() + static_cast<size_t>(i) * c;
    double mx = x[0];
    for (int j = 1; j < c; ++j) mx = std::max(mx, x[j]);
    double z = 0.0;
    for (int j = 0; j < c; ++j) {
      y[j] = std::exp(x[j] - mx);
      z += y[j];
    }
    const double inv = 1.0 / z;
    for (int j = 0; j < c; ++j) y[j] *= inv;
  }
  if (recording({&a})) {
    out.set_requires_grad(true);
    Tape::current()->record([ai = a.impl(), oi = out.impl(), r, c] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ai);
      const auto& k = kernels::active();
      for (int i = 0; i < r; ++i) {
        const size_t off = static_cast<size_t>(i) * c;
        const double* gi = g->data() + off;
        const double* yi = oi->data.data() + off;
        const double gy = k.dot(gi, yi, c);
        for (int j = 0; j < c; ++j) dst[off + j] += yi[j] * (gi[j] - gy);
      }
    });
  }
  return out;
}

Tensor embed_lookup(const Tensor& table, const std::vector<int>& ids) {
  require(table.ndim() == 2, "embed_lookup: table must be 2-d");
  const int v = table.rows(), e = table.cols();
  for (int id : ids)
    require(0 <= id && id < v, "embed_lookup: token id " + std::to_string(id) +
                                   " out of range [0," + std::to_string(v) +
                                   ")");
  const int n = static_cast<int>(ids.size());
  Tensor out = Tensor::zeros({n, e});
  for (int i = 0; i < n; ++i)
    std::copy(table.data() + static_cast<size_t>(ids[i]) * e,
              table.data() + static_cast<size_t>(ids[i] + 1) * e,
              out.mutable_data() + static_cast<size_t>(i) * e);
  if (recording({&table})) {
    out.set_requires_grad(true);
    Tape::current()->record([ti = table.impl(), oi = out.impl(), ids, n, e] {
      const auto* g = out_grad(oi);
      if (!g) return;
      auto& dst = Tensor::ensure_grad(ti);
      for (int i = 0; i < n; ++i)
        kernels::active().add(dst.data() + static_cast<size_t>(ids[i]) * e,
                              g->data() + static_cast<size_t>(i) * e,
                              dst.data() + static_cast<size_t>(ids[i]) * e, e);
    });
  }
  return out;
}

namespace {
// rotation applied in-place to a buffer laid out like x; sign=-1 inverts
void rope_apply(const double* x, double* y, const std::vector<int>& pos, int t,
                int d, double base, double sign) {
  const int half = d / 2;
  for (int i = 0; i < t; ++i) {
    const double p = static_cast<double>(pos[i]);
    for (int h = 0; h < half; ++h) {
      const double theta = p * std::pow(base, -2.0 * h / d);
      const double cs = std::cos(theta), sn = sign * std::sin(theta);
      const double x0 = x[static_cast<size_t>(i) * d + 2 * h];
      const double x1 = x[static_cast<size_t>(i) * d + 2 * h + 1];
      y[static_cast<size_t>(i) * d + 2 * h] = x0 * cs - x1 * sn;
      y[static_cast<size_t>(i) * d + 2 * h + 1] = x0 * sn + x1 * cs;
    }
  }
}
}  // namespace

Tensor rope(const Tensor& x, const std::vector<int>& positions, double base) {
  require(x.ndim() == 2 && x.cols() % 2 == 0,
          "rope: input must be 2-d with even column count, got " +
              shape_str(x.shape()));
  require(static_cast<int>(positions.size()) == x.rows(),
          "rope: positions length mismatch");
  const int t = x.rows(), d = x.cols();
  Tensor out = Tensor::zeros(x.shape());
  rope_apply(x.data(), out.mutable_data(), positions, t, d, base, 1.0);
  if (recording({&x})) {
    out.set_requires_grad(true);
    Tape::current()->record([xi = x.impl(), oi = out.impl(), positions, t, d,
                             base] {
      const auto* g = out_grad(oi);
      if (!g) return;
      std::vector<double> tmp(g->size());
      rope_apply(g->data(), tmp.data(), positions, t, d, base, -1.0);
      auto& dst = Tensor::ensure_grad(xi);
      kernels::active().add(dst.data(), tmp.data(), dst.data(), tmp.size());
    });
  }
  return out;
}

Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b) {
  return add_rowvec(matmul(x, w), b);
}

}  // namespace gg
