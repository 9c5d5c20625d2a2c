#include "singrad/kernels.hpp"

#include <stdexcept>

namespace singrad::kernels {

namespace serial {
void apply(const Tridiagonal&, std::span<const double>, std::span<double>);
void gradient(const RadialOperator&, std::span<const double>, std::span<double>);
void newton_system(const RadialOperator&, std::span<const double>, std::span<const double>, double,
                   const CutoffCubic&, double, double, std::span<double>, Tridiagonal&);
void imex_system(const RadialOperator&, std::span<const double>, std::span<const double>, double,
                 const CutoffCubic&, double, double, std::span<double>, Tridiagonal&);
double blocked_sum(std::span<const double>);
double max_abs(std::span<const double>);
}  // namespace serial

namespace openmp {
void apply(const Tridiagonal&, std::span<const double>, std::span<double>);
void gradient(const RadialOperator&, std::span<const double>, std::span<double>);
void newton_system(const RadialOperator&, std::span<const double>, std::span<const double>, double,
                   const CutoffCubic&, double, double, std::span<double>, Tridiagonal&);
void imex_system(const RadialOperator&, std::span<const double>, std::span<const double>, double,
                 const CutoffCubic&, double, double, std::span<double>, Tridiagonal&);
double blocked_sum(std::span<const double>);
double max_abs(std::span<const double>);
int available_threads();
}  // namespace openmp

std::string to_string(Backend b) { return b == Backend::serial ? "serial" : "openmp"; }

Backend parse_backend(const std::string& name) {
  if (name == "serial") return Backend::serial;
  if (name == "openmp") return Backend::openmp;
  throw std::invalid_argument("unknown kernel backend '" + name + "'");
}

int available_threads() { return openmp::available_threads(); }

namespace {
void check_sizes(std::size_t a, std::size_t b, const char* who) {
  if (a != b) throw std::invalid_argument(std::string(who) + ": size mismatch");
}
}  // namespace

void apply(Backend b, const Tridiagonal& T, std::span<const double> u, std::span<double> out) {
  check_sizes(T.size(), u.size(), "apply");
  check_sizes(u.size(), out.size(), "apply");
  b == Backend::serial ? serial::apply(T, u, out) : openmp::apply(T, u, out);
}

void gradient(Backend b, const RadialOperator& op, std::span<const double> u,
              std::span<double> out) {
  check_sizes(op.size(), u.size(), "gradient");
  check_sizes(u.size(), out.size(), "gradient");
  b == Backend::serial ? serial::gradient(op, u, out) : openmp::gradient(op, u, out);
}

void newton_system(Backend b, const RadialOperator& op, std::span<const double> u,
                   std::span<const double> u_old, double dt, const CutoffCubic& f, double inner,
                   double outer, std::span<double> residual, Tridiagonal& jacobian) {
  check_sizes(op.size(), u.size(), "newton_system");
  check_sizes(u.size(), u_old.size(), "newton_system");
  check_sizes(u.size(), residual.size(), "newton_system");
  if (jacobian.size() != u.size()) jacobian = Tridiagonal(u.size());
  b == Backend::serial
      ? serial::newton_system(op, u, u_old, dt, f, inner, outer, residual, jacobian)
      : openmp::newton_system(op, u, u_old, dt, f, inner, outer, residual, jacobian);
}

void imex_system(Backend b, const RadialOperator& op, std::span<const double> u_now,
                 std::span<const double> u_lag, double dt, const CutoffCubic& f, double inner,
                 double outer, std::span<double> rhs, Tridiagonal& matrix) {
  check_sizes(op.size(), u_now.size(), "imex_system");
  check_sizes(u_now.size(), u_lag.size(), "imex_system");
  check_sizes(u_now.size(), rhs.size(), "imex_system");
  if (matrix.size() != u_now.size()) matrix = Tridiagonal(u_now.size());
  b == Backend::serial ? serial::imex_system(op, u_now, u_lag, dt, f, inner, outer, rhs, matrix)
                       : openmp::imex_system(op, u_now, u_lag, dt, f, inner, outer, rhs, matrix);
}

double blocked_sum(Backend b, std::span<const double> x) {
  return b == Backend::serial ? serial::blocked_sum(x) : openmp::blocked_sum(x);
}

double max_abs(Backend b, std::span<const double> x) {
  return b == Backend::serial ? serial::max_abs(x) : openmp::max_abs(x);
}

}  // namespace singrad::kernels
