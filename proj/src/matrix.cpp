#include "seqspace/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "seqspace/error.hpp"
#include "seqspace/kernels.hpp"
#include "seqspace/special.hpp"

namespace seqspace {

using TailFn = std::function<std::optional<double>(double, Index)>;

struct MatrixDescriptor::Model {
  MatrixFamily family = MatrixFamily::custom;
  std::string name;
  MatrixFlags flags;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<double> weights;

  std::function<Complex(Index, Index)> entry;
  // Optional faster paths; the generic code falls back to `entry`.
  std::function<void(Index, Index, Complex*)> row;
  std::function<double(Index)> diag_modulus;

  std::optional<Index> prefix;
  std::optional<Index> lower_bw;
  std::optional<Index> upper_bw;
  bool first_column_dominated = false;

  std::function<Summability(double)> summability;
  TailFn diag_tail;
  TailFn first_col_tail;
  TailFn mixed_tail;
  std::function<std::optional<MatrixDescriptor>()> inverse;
};

const char* to_string(MatrixFamily family) noexcept {
  switch (family) {
    case MatrixFamily::identity: return "identity";
    case MatrixFamily::cesaro: return "cesaro";
    case MatrixFamily::norlund: return "norlund";
    case MatrixFamily::riesz: return "riesz";
    case MatrixFamily::hausdorff: return "hausdorff";
    case MatrixFamily::hilbert: return "hilbert";
    case MatrixFamily::diagonal: return "diagonal";
    case MatrixFamily::power_type: return "power-type";
    case MatrixFamily::cesaro_inverse: return "cesaro-inverse";
    case MatrixFamily::remark_counterexample: return "remark-counterexample";
    case MatrixFamily::remark_counterexample_inverse: return "remark-counterexample-inverse";
    case MatrixFamily::custom: return "custom";
    case MatrixFamily::transpose: return "transpose";
  }
  return "unknown";
}

namespace {

using Model = MatrixDescriptor::Model;

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::floor(v); }

std::string format_number(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}

std::vector<double> partial_sums(const std::vector<double>& w) {
  std::vector<double> out(w.size());
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = (s += w[i]);
  return out;
}

void require_positive_weights(const std::vector<double>& w, const char* family) {
  if (w.empty()) fail(ErrorKind::parameter, std::string(family) + " needs a nonempty weight prefix");
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::parameter, std::string(family) + " weights must be finite and positive");
    }
  }
}

Summability summable_iff(bool cond) { return cond ? Summability::summable : Summability::divergent; }

// Closed form of sum_{n > N} c n^-s style tails that are infinite for s <= 1.
std::optional<double> zeta_tail(double scale, double s, double shift) {
  if (s <= 1.0) return kInfinity;
  return scale * hurwitz_zeta(s, shift);
}

std::shared_ptr<Model> diagonal_model(std::string name, std::function<Complex(Index)> d) {
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::diagonal;
  model->name = std::move(name);
  model->flags = {true, true, false};
  model->entry = [d](Index n, Index k) { return n == k ? d(n) : Complex(0.0); };
  model->diag_modulus = [d](Index n) { return std::abs(d(n)); };
  model->lower_bw = 0;
  model->upper_bw = 0;
  model->summability = [](double) { return Summability::unknown; };
  return model;
}

MatrixDescriptor explicit_diagonal(std::vector<Complex> w, std::string name) {
  if (w.empty()) fail(ErrorKind::parameter, "diagonal needs a nonempty weight prefix");
  auto shared = std::make_shared<const std::vector<Complex>>(std::move(w));
  auto model = diagonal_model(std::move(name), [shared](Index n) { return (*shared)[n - 1]; });
  model->prefix = shared->size();
  for (const Complex& v : *shared) model->weights.push_back(std::abs(v));
  model->inverse = [shared]() -> std::optional<MatrixDescriptor> {
    std::vector<Complex> inv(shared->size());
    for (std::size_t i = 0; i < inv.size(); ++i) {
      if ((*shared)[i] == Complex(0.0)) {
        fail(ErrorKind::singular, "diagonal entry " + std::to_string(i + 1) + " is zero");
      }
      inv[i] = 1.0 / (*shared)[i];
    }
    return explicit_diagonal(std::move(inv), "diagonal");
  };
  return MatrixDescriptor::from_model(std::move(model));
}

MatrixDescriptor factorial_diagonal() {
  auto model = diagonal_model("diagonal(n!)", [](Index n) { return Complex(std::exp(std::lgamma(n + 1.0))); });
  model->parameters = {{"generator", 0.0}};
  model->summability = [](double) { return Summability::divergent; };
  model->inverse = [] { return std::optional<MatrixDescriptor>(MatrixDescriptor::inverse_factorial_diagonal()); };
  return MatrixDescriptor::from_model(std::move(model));
}

double inverse_factorial(Index n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    double f = 1.0;
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) {
      f *= i;
      t[i] = 1.0 / f;
    }
    return t;
  }();
  if (n <= 170) return table[n];
  return std::exp(-std::lgamma(static_cast<double>(n) + 1.0));
}

Complex hausdorff_entry(const std::vector<double>& mu, Index i, Index j) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (j > i) return 0.0;
  // D diag(mu) D at (i, j) equals C(i,j) sum_t (-1)^t C(i-j, t) mu(j+t).
  const Index span = i - j;
  cpp_rational acc = 0;
  cpp_int binom = 1;
  for (Index t = 0; t <= span; ++t) {
    cpp_rational term = cpp_rational(mu[j + t]) * cpp_rational(binom);
    if (t % 2 == 0) acc += term; else acc -= term;
    binom = binom * (span - t) / (t + 1);
  }
  cpp_int outer = 1;
  for (Index t = 0; t < j; ++t) outer = outer * (i - t) / (t + 1);
  acc *= cpp_rational(outer);
  return acc.convert_to<double>();
}

}  // namespace

MatrixDescriptor MatrixDescriptor::from_model(std::shared_ptr<const Model> model) {
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::identity() {
  auto model = diagonal_model("identity", [](Index) { return Complex(1.0); });
  model->family = MatrixFamily::identity;
  model->summability = [](double) { return Summability::divergent; };
  model->inverse = [] { return std::optional<MatrixDescriptor>(identity()); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::cesaro(double alpha) {
  if (!std::isfinite(alpha) || is_nonpositive_integer(alpha)) {
    fail(ErrorKind::parameter, "cesaro alpha must be finite and not in {0, -1, -2, ...}, got " +
                                   format_number(alpha));
  }
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::cesaro;
  model->name = "cesaro(" + format_number(alpha) + ")";
  model->parameters = {{"alpha", alpha}};
  model->flags = {true, false, alpha >= 1.0};
  model->first_column_dominated = alpha >= 1.0;
  model->upper_bw = 0;
  // Telescoped binomial ratio: alpha/(n+alpha-1) * prod_{j<k} (n-j)/(n+alpha-1-j).
  model->entry = [alpha](Index n, Index k) -> Complex {
    if (k > n) return 0.0;
    const double nd = static_cast<double>(n);
    double c = alpha / (nd + alpha - 1.0);
    for (Index j = 1; j < k; ++j) c *= (nd - j) / (nd + alpha - 1.0 - j);
    return c;
  };
  model->row = [alpha](Index n, Index kmax, Complex* out) {
    const double nd = static_cast<double>(n);
    double c = alpha / (nd + alpha - 1.0);
    for (Index k = 1; k <= kmax; ++k) {
      if (k > n) {
        out[k - 1] = 0.0;
        continue;
      }
      out[k - 1] = c;
      c *= (nd - k) / (nd + alpha - 1.0 - k);
    }
  };
  model->diag_modulus = [alpha](Index n) {
    if (alpha == 1.0) return 1.0 / static_cast<double>(n);
    double c = 1.0;
    for (Index j = 1; j < n; ++j) c *= j / (j + alpha);
    return std::fabs(c);
  };
  model->summability = [alpha](double p) {
    if (alpha < 0.0) return Summability::divergent;
    return summable_iff(alpha * p > 1.0);
  };
  if (alpha == 1.0) {
    model->diag_tail = [](double p, Index n) -> std::optional<double> {
      if (p <= 1.0) return std::nullopt;
      return hurwitz_zeta(p, static_cast<double>(n));
    };
    model->mixed_tail = [](double p, Index N) { return zeta_tail(1.0, p, N + 1.0); };
    model->inverse = [] { return std::optional<MatrixDescriptor>(cesaro_inverse()); };
  }
  if (alpha > 0.0) {
    model->first_col_tail = [alpha](double p, Index N) {
      return zeta_tail(std::pow(alpha, p), p, N + alpha);
    };
  }
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::norlund(std::vector<double> weights) {
  require_positive_weights(weights, "norlund");
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::norlund;
  model->name = "norlund";
  const bool nondecreasing = std::is_sorted(weights.begin(), weights.end());
  model->flags = {true, false, nondecreasing};
  model->first_column_dominated = nondecreasing;
  model->upper_bw = 0;
  model->prefix = weights.size();
  model->weights = weights;
  auto w = std::make_shared<const std::vector<double>>(weights);
  auto W = std::make_shared<const std::vector<double>>(partial_sums(weights));
  model->entry = [w, W](Index n, Index k) -> Complex {
    if (k > n) return 0.0;
    return (*w)[n - k] / (*W)[n - 1];
  };
  model->summability = [](double) { return Summability::unknown; };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::riesz(std::vector<double> weights) {
  require_positive_weights(weights, "riesz");
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::riesz;
  model->name = "riesz";
  const bool nonincreasing = std::is_sorted(weights.rbegin(), weights.rend());
  model->flags = {true, false, nonincreasing};
  model->first_column_dominated = nonincreasing;
  model->upper_bw = 0;
  model->prefix = weights.size();
  model->weights = weights;
  auto w = std::make_shared<const std::vector<double>>(weights);
  auto W = std::make_shared<const std::vector<double>>(partial_sums(weights));
  model->entry = [w, W](Index n, Index k) -> Complex {
    if (k > n) return 0.0;
    return (*w)[k - 1] / (*W)[n - 1];
  };
  model->summability = [](double) { return Summability::unknown; };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::hausdorff(std::vector<double> mu) {
  if (mu.empty()) fail(ErrorKind::parameter, "hausdorff needs a nonempty weight prefix");
  for (double v : mu) {
    if (!std::isfinite(v)) fail(ErrorKind::parameter, "hausdorff weights must be finite");
  }
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::hausdorff;
  model->name = "hausdorff";
  model->flags = {true, false, false};
  model->upper_bw = 0;
  model->prefix = mu.size();
  model->weights = mu;
  auto shared = std::make_shared<const std::vector<double>>(std::move(mu));
  model->entry = [shared](Index n, Index k) { return hausdorff_entry(*shared, n - 1, k - 1); };
  model->summability = [](double) { return Summability::unknown; };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::hilbert() {
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::hilbert;
  model->name = "hilbert";
  model->flags = {false, false, true};
  model->first_column_dominated = true;
  model->entry = [](Index n, Index k) -> Complex { return 1.0 / static_cast<double>(n + k - 1); };
  model->summability = [](double p) { return summable_iff(p > 1.0); };
  model->diag_tail = [](double p, Index n) -> std::optional<double> {
    if (p <= 1.0) return std::nullopt;
    return std::pow(2.0, -p) * hurwitz_zeta(p, n - 0.5);
  };
  model->first_col_tail = [](double p, Index N) { return zeta_tail(1.0, p, N + 1.0); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::diagonal(std::vector<Complex> weights) {
  return explicit_diagonal(std::move(weights), "diagonal");
}

MatrixDescriptor MatrixDescriptor::geometric_diagonal(Complex scale, double ratio) {
  if (!std::isfinite(ratio) || !std::isfinite(scale.real()) || !std::isfinite(scale.imag())) {
    fail(ErrorKind::parameter, "geometric diagonal needs finite scale and ratio");
  }
  auto model = diagonal_model("diagonal(" + format_number(std::abs(scale)) + "*" + format_number(ratio) + "^n)",
                              [scale, ratio](Index n) { return scale * std::pow(ratio, static_cast<double>(n)); });
  model->parameters = {{"scale_re", scale.real()}, {"scale_im", scale.imag()}, {"ratio", ratio}};
  const double r = std::fabs(ratio);
  const double s = std::abs(scale);
  model->summability = [r, s](double) { return summable_iff(s == 0.0 || r < 1.0); };
  if (r < 1.0) {
    model->diag_tail = [r, s](double p, Index n) -> std::optional<double> {
      const double rp = std::pow(r, p);
      return pow_abs(s, p) * std::pow(rp, static_cast<double>(n)) / (1.0 - rp);
    };
  }
  model->inverse = [scale, ratio]() -> std::optional<MatrixDescriptor> {
    if (scale == Complex(0.0) || ratio == 0.0) fail(ErrorKind::singular, "geometric diagonal has zero entries");
    return geometric_diagonal(1.0 / scale, 1.0 / ratio);
  };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::inverse_factorial_diagonal() {
  auto model = diagonal_model("diagonal(1/n!)", [](Index n) { return Complex(inverse_factorial(n)); });
  model->parameters = {{"generator", 1.0}};
  model->summability = [](double) { return Summability::summable; };
  // The series converges faster than geometrically; summing until the terms
  // stop registering gives the tail to working precision.
  model->diag_tail = [](double p, Index n) -> std::optional<double> {
    double total = 0.0;
    for (Index k = n;; ++k) {
      double term = pow_abs(inverse_factorial(k), p);
      if (term == 0.0 || term <= 1e-18 * total) break;
      total += term;
    }
    return total;
  };
  model->inverse = [] { return std::optional<MatrixDescriptor>(factorial_diagonal()); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::power_type(double gamma, double beta) {
  if (!(gamma > 0.0) || !std::isfinite(gamma) || !std::isfinite(beta)) {
    fail(ErrorKind::parameter, "power-type needs finite gamma > 0 and finite beta");
  }
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::power_type;
  model->name = "power-type(" + format_number(gamma) + "," + format_number(beta) + ")";
  model->parameters = {{"gamma", gamma}, {"beta", beta}};
  model->flags = {true, false, true};
  model->first_column_dominated = true;
  model->upper_bw = 0;
  model->entry = [gamma, beta](Index n, Index k) -> Complex {
    if (k > n) return 0.0;
    return gamma * std::pow(static_cast<double>(n), -beta);
  };
  model->row = [gamma, beta](Index n, Index kmax, Complex* out) {
    const double v = gamma * std::pow(static_cast<double>(n), -beta);
    for (Index k = 1; k <= kmax; ++k) out[k - 1] = k <= n ? v : 0.0;
  };
  model->summability = [beta](double p) { return summable_iff(beta * p > 1.0); };
  model->diag_tail = [gamma, beta](double p, Index n) -> std::optional<double> {
    if (beta * p <= 1.0) return std::nullopt;
    return std::pow(gamma, p) * hurwitz_zeta(beta * p, static_cast<double>(n));
  };
  model->first_col_tail = [gamma, beta](double p, Index N) {
    return zeta_tail(std::pow(gamma, p), beta * p, N + 1.0);
  };
  model->mixed_tail = model->first_col_tail;
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::cesaro_inverse() {
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::cesaro_inverse;
  model->name = "cesaro-inverse";
  model->flags = {true, false, false};
  model->lower_bw = 1;
  model->upper_bw = 0;
  model->entry = [](Index n, Index k) -> Complex {
    if (k == n) return static_cast<double>(n);
    if (k + 1 == n) return -static_cast<double>(n - 1);
    return 0.0;
  };
  model->summability = [](double) { return Summability::divergent; };
  model->inverse = [] { return std::optional<MatrixDescriptor>(cesaro(1.0)); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::remark_counterexample() {
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::remark_counterexample;
  model->name = "remark-counterexample";
  model->flags = {false, false, false};
  model->lower_bw = 0;
  model->upper_bw = 1;
  model->entry = [](Index n, Index k) -> Complex { return (k == n || k == n + 1) ? 1.0 : 0.0; };
  model->summability = [](double) { return Summability::divergent; };
  model->inverse = [] { return std::optional<MatrixDescriptor>(remark_counterexample_inverse()); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::remark_counterexample_inverse() {
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::remark_counterexample_inverse;
  model->name = "remark-counterexample-inverse";
  model->flags = {false, false, false};
  model->lower_bw = 0;
  model->entry = [](Index n, Index k) -> Complex {
    if (k < n) return 0.0;
    return (n + k) % 2 == 0 ? 1.0 : -1.0;
  };
  model->summability = [](double) { return Summability::divergent; };
  model->inverse = [] { return std::optional<MatrixDescriptor>(remark_counterexample()); };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::custom(std::string name, std::function<Complex(Index, Index)> entry,
                                          MatrixFlags flags) {
  if (!entry) fail(ErrorKind::parameter, "custom matrix needs an entry function");
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::custom;
  model->name = std::move(name);
  model->flags = flags;
  if (flags.lower_triangular || flags.diagonal) model->upper_bw = 0;
  if (flags.diagonal) model->lower_bw = 0;
  model->entry = std::move(entry);
  model->summability = [](double) { return Summability::unknown; };
  return MatrixDescriptor(std::move(model));
}

MatrixDescriptor MatrixDescriptor::from_entries(std::vector<SparseEntry> entries) {
  std::map<std::pair<Index, Index>, Complex> table;
  for (const auto& e : entries) {
    if (e.row < 1 || e.col < 1) fail(ErrorKind::index, "custom entries use 1-based indices");
    table[{e.row, e.col}] += e.value;
  }
  std::erase_if(table, [](const auto& kv) { return kv.second == Complex(0.0); });

  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::custom;
  model->name = "custom";
  Index lower = 0, upper = 0;
  bool dominated = true;
  std::map<Index, std::map<Index, double>> rows;
  for (const auto& [key, value] : table) {
    auto [n, k] = key;
    if (n > k) lower = std::max(lower, n - k);
    if (k > n) upper = std::max(upper, k - n);
    rows[n][k] = std::abs(value);
  }
  bool monotone = true;
  for (const auto& [n, cols] : rows) {
    auto at = [&cols](Index k) {
      auto it = cols.find(k);
      return it == cols.end() ? 0.0 : it->second;
    };
    for (Index k = 1; k < n && monotone; ++k) {
      if (at(k + 1) > at(k)) monotone = false;
    }
    const double first = at(1);
    for (const auto& [k, v] : cols) {
      if (v > first) dominated = false;
    }
  }
  model->flags = {upper == 0, upper == 0 && lower == 0, monotone};
  model->lower_bw = lower;
  model->upper_bw = upper;
  model->first_column_dominated = dominated;
  auto shared = std::make_shared<const std::map<std::pair<Index, Index>, Complex>>(std::move(table));
  model->entry = [shared](Index n, Index k) -> Complex {
    auto it = shared->find({n, k});
    return it == shared->end() ? Complex(0.0) : it->second;
  };
  model->summability = [](double) { return Summability::summable; };
  // Finitely many nonzero entries: every tail is a finite sum.
  auto sum_where = [shared](auto pred, auto term) {
    double total = 0.0;
    for (const auto& [key, value] : *shared) {
      if (pred(key.first, key.second)) total += term(key.first, std::abs(value));
    }
    return total;
  };
  model->diag_tail = [sum_where](double p, Index n) -> std::optional<double> {
    return sum_where([n](Index r, Index c) { return r == c && r >= n; },
                     [p](Index, double v) { return pow_abs(v, p); });
  };
  model->first_col_tail = [sum_where](double p, Index N) -> std::optional<double> {
    return sum_where([N](Index r, Index c) { return c == 1 && r > N; },
                     [p](Index, double v) { return pow_abs(v, p); });
  };
  model->mixed_tail = [shared](double p, Index N) -> std::optional<double> {
    double total = 0.0;
    for (const auto& [key, value] : *shared) {
      auto [n, k] = key;
      if (n != k || n <= N) continue;
      auto first = shared->find({n, 1});
      double m1 = first == shared->end() ? 0.0 : std::abs(first->second);
      total += std::abs(value) * pow_abs(m1, p - 1.0);
    }
    return total;
  };
  return MatrixDescriptor(std::move(model));
}

MatrixFamily MatrixDescriptor::family() const noexcept { return model_->family; }
const std::string& MatrixDescriptor::name() const noexcept { return model_->name; }
const MatrixFlags& MatrixDescriptor::flags() const noexcept { return model_->flags; }
const std::vector<std::pair<std::string, double>>& MatrixDescriptor::parameters() const noexcept {
  return model_->parameters;
}
const std::vector<double>& MatrixDescriptor::weights() const noexcept { return model_->weights; }
std::optional<Index> MatrixDescriptor::prefix() const noexcept { return model_->prefix; }
std::optional<Index> MatrixDescriptor::lower_bandwidth() const noexcept { return model_->lower_bw; }
std::optional<Index> MatrixDescriptor::upper_bandwidth() const noexcept { return model_->upper_bw; }
bool MatrixDescriptor::first_column_dominated() const noexcept { return model_->first_column_dominated; }

Complex MatrixDescriptor::entry(Index n, Index k) const {
  if (n < 1 || k < 1) fail(ErrorKind::index, "matrix indices start at 1");
  if (model_->prefix && (n > *model_->prefix || k > *model_->prefix)) {
    fail(ErrorKind::index, model_->name + ": entry (" + std::to_string(n) + "," + std::to_string(k) +
                               ") lies beyond the weight prefix of length " + std::to_string(*model_->prefix));
  }
  return model_->entry(n, k);
}

void MatrixDescriptor::row(Index n, Index kmax, Complex* out) const {
  if (n < 1) fail(ErrorKind::index, "matrix indices start at 1");
  if (model_->prefix && n > *model_->prefix) {
    fail(ErrorKind::index, model_->name + ": row " + std::to_string(n) + " lies beyond the weight prefix");
  }
  if (model_->row) {
    model_->row(n, kmax, out);
    return;
  }
  // Skip entries known to vanish from the band structure.
  Index lo = 1;
  Index hi = kmax;
  if (model_->lower_bw && n > *model_->lower_bw + 1) lo = n - *model_->lower_bw;
  if (model_->upper_bw) hi = std::min(hi, n + *model_->upper_bw);
  for (Index k = 1; k <= kmax; ++k) out[k - 1] = (k >= lo && k <= hi) ? entry(n, k) : Complex(0.0);
}

std::vector<double> MatrixDescriptor::row_moduli(Index n, Index kmax) const {
  std::vector<Complex> buf(kmax);
  row(n, kmax, buf.data());
  std::vector<double> out(kmax);
  kernels::active().moduli(buf.data(), out.data(), kmax);
  return out;
}

std::vector<double> MatrixDescriptor::diagonal_powers(double p, Index N) const {
  if (model_->prefix && N > *model_->prefix) {
    fail(ErrorKind::index, model_->name + ": diagonal requested beyond the weight prefix");
  }
  std::vector<double> out(N);
  if (model_->family == MatrixFamily::cesaro && model_->parameters[0].second != 1.0) {
    // c(n+1,n+1) = c(n,n) * n / (n + alpha)
    const double alpha = model_->parameters[0].second;
    double c = 1.0;
    for (Index n = 1; n <= N; ++n) {
      out[n - 1] = pow_abs(c, p);
      c *= n / (n + alpha);
    }
    return out;
  }
  for (Index n = 1; n <= N; ++n) {
    double v = model_->diag_modulus ? model_->diag_modulus(n) : std::abs(entry(n, n));
    out[n - 1] = pow_abs(v, p);
  }
  return out;
}

Summability MatrixDescriptor::diagonal_summability(double p) const {
  return model_->summability ? model_->summability(p) : Summability::unknown;
}

std::optional<double> MatrixDescriptor::diagonal_tail_closed_form(double p, Index n) const {
  if (!model_->diag_tail) return std::nullopt;
  return model_->diag_tail(p, n);
}

std::optional<double> MatrixDescriptor::first_column_tail(double p, Index N) const {
  if (!model_->first_col_tail) return std::nullopt;
  return model_->first_col_tail(p, N);
}

std::optional<double> MatrixDescriptor::mixed_tail(double p, Index N) const {
  if (!model_->mixed_tail) return std::nullopt;
  return model_->mixed_tail(p, N);
}

std::optional<MatrixDescriptor> MatrixDescriptor::cataloged_inverse() const {
  if (!model_->inverse) return std::nullopt;
  return model_->inverse();
}

MatrixDescriptor MatrixDescriptor::transposed() const {
  auto source = model_;
  auto model = std::make_shared<Model>();
  model->family = MatrixFamily::transpose;
  model->name = "transpose(" + source->name + ")";
  model->flags = {source->lower_bw == Index{0}, source->flags.diagonal, false};
  model->lower_bw = source->upper_bw;
  model->upper_bw = source->lower_bw;
  model->prefix = source->prefix;
  MatrixDescriptor original(source);
  model->entry = [original](Index n, Index k) { return original.entry(k, n); };
  model->diag_modulus = source->diag_modulus;
  model->summability = source->summability;
  model->diag_tail = source->diag_tail;
  model->inverse = [original]() -> std::optional<MatrixDescriptor> {
    auto inv = original.cataloged_inverse();
    if (!inv) return std::nullopt;
    return inv->transposed();
  };
  return MatrixDescriptor(std::move(model));
}

Complex inverse_entry(const MatrixDescriptor& m, Index n, Index k) {
  auto inv = m.cataloged_inverse();
  if (!inv) fail(ErrorKind::unsupported, m.name() + " has no cataloged inverse");
  return inv->entry(n, k);
}

TruncatedSequence apply(const MatrixDescriptor& m, const TruncatedSequence& x, Index truncation) {
  const bool lower = m.lower_triangular();
  const bool finite = x.finite_support();
  if (!lower && !finite) {
    fail(ErrorKind::truncation_unsound,
         "rows of " + m.name() + " are infinite sums; x must be finitely supported");
  }
  const Index support = x.support_bound();
  std::vector<Complex> out(truncation);
  std::vector<Complex> row;
  for (Index n = 1; n <= truncation; ++n) {
    Index kmax = lower ? n : support;
    if (finite) kmax = std::min(kmax, support);
    if (kmax == 0) continue;
    row.resize(kmax);
    m.row(n, kmax, row.data());
    Complex acc = 0.0;
    for (Index k = 1; k <= kmax; ++k) acc += row[k - 1] * x(k);
    out[n - 1] = acc;
  }
  const auto bw = m.lower_bandwidth();
  bool exact_tail = finite && (support == 0 || (bw && support + *bw <= truncation));
  return TruncatedSequence(std::move(out), exact_tail);
}

TruncatedSequence solve_lower_triangular(const MatrixDescriptor& m, const TruncatedSequence& u,
                                         Index truncation) {
  if (!m.lower_triangular()) {
    fail(ErrorKind::precondition, m.name() + " is not lower-triangular");
  }
  std::vector<Complex> x(truncation);
  std::vector<Complex> row(truncation);
  for (Index n = 1; n <= truncation; ++n) {
    m.row(n, n, row.data());
    const Complex d = row[n - 1];
    if (std::abs(d) < 1e-30) {
      fail(ErrorKind::singular, m.name() + ": diagonal entry " + std::to_string(n) + " is (near) zero");
    }
    Complex acc = u(n);
    for (Index k = 1; k < n; ++k) acc -= row[k - 1] * x[k - 1];
    x[n - 1] = acc / d;
  }

  bool finite = false;
  if (u.finite_support()) {
    if (auto inv = m.cataloged_inverse(); inv && inv->lower_bandwidth()) {
      finite = u.support_bound() + *inv->lower_bandwidth() <= truncation;
    }
  }
  TruncatedSequence result(std::move(x), finite);

  const TruncatedSequence back = apply(m, result.resized(truncation), truncation);
  double scale = 0.0, residual = 0.0;
  for (Index n = 1; n <= truncation; ++n) {
    scale = std::max(scale, std::abs(u(n)));
    residual = std::max(residual, std::abs(back(n) - u(n)));
  }
  if (residual > 1e-10 * scale) {
    fail(ErrorKind::internal, "forward substitution residual " + format_number(residual) +
                                  " exceeds 1e-10 relative");
  }
  return result;
}

ColumnCheck check_no_vanishing_columns(const MatrixDescriptor& m, Index truncation, double tau) {
  std::vector<bool> seen(truncation + 1, false);
  for (Index n = 1; n <= truncation; ++n) {
    const auto moduli = m.row_moduli(n, truncation);
    for (Index k = 1; k <= truncation; ++k) {
      if (moduli[k - 1] > tau) seen[k] = true;
    }
  }
  for (Index k = 1; k <= truncation; ++k) {
    if (!seen[k]) return {false, k};
  }
  return {};
}

RowMonotoneCheck check_row_monotone(const MatrixDescriptor& m, Index truncation) {
  for (Index n = 2; n <= truncation; ++n) {
    const auto moduli = m.row_moduli(n, n);
    for (Index k = 1; k < n; ++k) {
      if (moduli[k] > moduli[k - 1] * (1.0 + 1e-12)) return {false, std::make_pair(n, k)};
    }
  }
  return {};
}

DiagonalTail diagonal_lp_tail(const MatrixDescriptor& m, double p, Index n, Index truncation) {
  if (!(p >= 1.0)) fail(ErrorKind::parameter, "exponent p must be >= 1");
  if (n < 1) fail(ErrorKind::index, "tail index starts at 1");
  if (m.diagonal_summability(p) == Summability::divergent) {
    fail(ErrorKind::divergence, "diagonal of " + m.name() + " is not l^" + format_number(p) + "-summable");
  }
  if (auto closed = m.diagonal_tail_closed_form(p, n)) return {*closed, true};
  double total = 0.0;
  if (n <= truncation) {
    const auto powers = m.diagonal_powers(p, truncation);
    for (Index k = truncation; k >= n; --k) total += powers[k - 1];
  }
  if (!(total <= 1e300)) fail(ErrorKind::divergence, "diagonal tail partial sums overflow");
  return {total, false};
}

GrowthReport check_growth_condition(const MatrixDescriptor& m, double p, Index truncation, double epsilon) {
  const SpaceParams params = SpaceParams::from_p(p);
  if (truncation < 2) fail(ErrorKind::parameter, "growth check needs N >= 2");
  if (m.diagonal_summability(p) == Summability::divergent) {
    fail(ErrorKind::divergence, "diagonal of " + m.name() + " is not l^" + format_number(p) + "-summable");
  }
  const bool closed = m.diagonal_tail_closed_form(p, 1).has_value();
  Index horizon = closed ? truncation : 16 * truncation;
  if (auto prefix = m.prefix()) horizon = std::max(truncation, std::min(horizon, *prefix));

  // Log-domain diagonal tails so that fast-decaying diagonals do not underflow.
  std::vector<double> log_d(horizon);
  for (Index n = 1; n <= horizon; ++n) {
    double modulus = std::abs(m.entry(n, n));
    log_d[n - 1] = modulus == 0.0 ? -kInfinity : p * std::log(modulus);
  }
  std::vector<double> log_tail(truncation);
  if (closed) {
    for (Index n = 1; n <= truncation; ++n) log_tail[n - 1] = std::log(*m.diagonal_tail_closed_form(p, n));
  }
  if (!closed || std::any_of(log_tail.begin(), log_tail.end(), [](double v) { return !std::isfinite(v); })) {
    double acc = -kInfinity;
    for (Index n = horizon; n >= 1; --n) {
      const double hi = std::max(acc, log_d[n - 1]);
      const double lo = std::min(acc, log_d[n - 1]);
      acc = hi == -kInfinity ? hi : hi + std::log1p(std::exp(lo - hi));
      if (n <= truncation) log_tail[n - 1] = acc;
    }
  }
  for (double v : log_tail) {
    if (v == -kInfinity) fail(ErrorKind::domain, "diagonal tail vanishes; weights are undefined");
  }

  std::vector<double> log_v(truncation);
  if (params.q_infinite()) {
    for (Index n = 1; n <= truncation; ++n) {
      const double first = std::abs(m.entry(n, 1));
      log_v[n - 1] = (1.0 + epsilon) * std::log(static_cast<double>(n)) - log_tail[n - 1] +
                     (first == 0.0 ? -kInfinity : std::log(first));
    }
  } else {
    const double r = params.q / p;
    double log_bhat = -kInfinity;
    for (Index n = 1; n <= truncation; ++n) {
      double log_b = -r * log_tail[n - 1];
      if (n > 1) {
        const double ratio = std::exp(log_d[n - 2] - log_tail[n - 2]);
        log_b += std::log(-std::expm1(r * std::log1p(-ratio)));
      }
      log_bhat = std::max(log_bhat, log_b);
      const double first = std::abs(m.entry(n, 1));
      log_v[n - 1] = std::log(static_cast<double>(n)) + log_bhat / params.q +
                     (first == 0.0 ? -kInfinity : std::log(first));
    }
  }

  GrowthReport report;
  const double log_sup = *std::max_element(log_v.begin(), log_v.end());
  report.sup_value = std::exp(log_sup);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (Index n = std::max<Index>(2, truncation / 8); n <= truncation; ++n) {
    if (!std::isfinite(log_v[n - 1])) continue;
    const double lx = std::log(static_cast<double>(n));
    sx += lx;
    sy += log_v[n - 1];
    sxx += lx * lx;
    sxy += lx * log_v[n - 1];
    ++count;
  }
  if (count >= 2) {
    const double denom = count * sxx - sx * sx;
    report.slope = denom > 0.0 ? (count * sxy - sx * sy) / denom : 0.0;
  }
  report.bounded = report.slope <= 0.05 && std::isfinite(log_sup);
  return report;
}

}  // namespace seqspace
