#include "dcfeas/instance_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "dcfeas/errors.hpp"

namespace dcfeas {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_vector(std::ostream& os, const char* tag, std::span<const double> v) {
  os << tag << ' ' << v.size();
  for (double x : v) os << ' ' << fmt(x);
  os << '\n';
}

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::kIo, "read_instance: " + what);
}

void expect(std::istream& is, const std::string& tag) {
  std::string word;
  if (!(is >> word) || word != tag) fail("expected '" + tag + "', got '" + word + "'");
}

template <typename T>
T read_value(std::istream& is, const std::string& what) {
  T v{};
  if (!(is >> v)) fail("bad value for " + what);
  return v;
}

// strtod accepts inf/nan spellings that operator>> rejects.
double read_real(std::istream& is, const std::string& what) {
  std::string word;
  if (!(is >> word)) fail("missing " + what);
  char* end = nullptr;
  const double v = std::strtod(word.c_str(), &end);
  if (end == word.c_str() || *end != '\0') fail("bad number '" + word + "' for " + what);
  return v;
}

Vector read_vector(std::istream& is, const std::string& tag) {
  expect(is, tag);
  const auto len = read_value<std::size_t>(is, tag + " length");
  Vector v(len);
  for (double& x : v) x = read_real(is, tag);
  return v;
}

}  // namespace

void write_instance(std::ostream& os, const ProblemInstance& inst) {
  if (inst.constraint_kind == ConstraintKind::kCustomConvex) {
    throw Error(ErrorCode::kUnsupported, "write_instance: custom constraints are not serializable");
  }
  const DenseMatrix& a = *inst.a;
  os << "dcfeas-instance 1\n";
  os << "kind " << inst.meta.kind << " seed " << inst.meta.seed << " p " << inst.meta.p << " n "
     << inst.meta.n << " k " << inst.meta.k << '\n';
  os << "constraint " << to_string(inst.constraint_kind) << '\n';
  os << "mu " << fmt(inst.objective.mu) << " sigma " << fmt(inst.sigma) << " radius "
     << fmt(inst.set.radius) << '\n';
  if (inst.constraint_kind == ConstraintKind::kLorentzian) {
    os << "phi " << (inst.phi.kind() == PhiFunction::Kind::kLogLorentzian ? "log" : "rational")
       << ' ' << fmt(inst.phi.parameter()) << '\n';
  }
  os << "matrix " << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? " " : "") << fmt(row[j]);
    os << '\n';
  }
  write_vector(os, "b", *inst.b);
  write_vector(os, "slater", inst.slater_point);
  if (inst.ground_truth) {
    os << "truth 1 ";
    write_vector(os, "values", *inst.ground_truth);
  } else {
    os << "truth 0\n";
  }
  const GroupStructure& groups = inst.set.groups;
  os << "groups " << groups.size() << '\n';
  for (std::size_t g = 0; g < groups.size(); ++g) {
    os << groups[g].size();
    for (std::size_t idx : groups[g]) os << ' ' << idx;
    os << '\n';
  }
  if (!os) throw Error(ErrorCode::kIo, "write_instance: stream failure");
}

ProblemInstance read_instance(std::istream& is) {
  expect(is, "dcfeas-instance");
  if (read_value<int>(is, "version") != 1) fail("unsupported version");
  InstanceMeta meta;
  expect(is, "kind");
  meta.kind = read_value<std::string>(is, "kind");
  expect(is, "seed");
  meta.seed = read_value<std::uint64_t>(is, "seed");
  expect(is, "p");
  meta.p = read_value<std::size_t>(is, "p");
  expect(is, "n");
  meta.n = read_value<std::size_t>(is, "n");
  expect(is, "k");
  meta.k = read_value<std::size_t>(is, "k");
  expect(is, "constraint");
  const auto constraint = read_value<std::string>(is, "constraint");
  expect(is, "mu");
  const double mu = read_real(is, "mu");
  expect(is, "sigma");
  const double sigma = read_real(is, "sigma");
  expect(is, "radius");
  const double radius = read_real(is, "radius");
  PhiFunction phi;
  if (constraint == "lorentzian") {
    expect(is, "phi");
    const auto kind = read_value<std::string>(is, "phi kind");
    const double param = read_real(is, "phi parameter");
    if (kind == "log") {
      phi = PhiFunction::log_lorentzian(param);
    } else if (kind == "rational") {
      phi = PhiFunction::rational(param);
    } else {
      fail("unknown phi kind '" + kind + "'");
    }
  } else if (constraint != "convex_ball") {
    fail("unknown constraint '" + constraint + "'");
  }
  expect(is, "matrix");
  const auto rows = read_value<std::size_t>(is, "rows");
  const auto cols = read_value<std::size_t>(is, "cols");
  DenseMatrix a(rows, cols);
  for (double& v : a.data()) v = read_real(is, "matrix entry");
  Vector b = read_vector(is, "b");
  Vector slater = read_vector(is, "slater");
  expect(is, "truth");
  std::optional<Vector> truth;
  if (read_value<int>(is, "truth flag") == 1) truth = read_vector(is, "values");
  expect(is, "groups");
  const auto count = read_value<std::size_t>(is, "group count");
  std::vector<std::vector<std::size_t>> parts(count);
  for (auto& part : parts) {
    part.resize(read_value<std::size_t>(is, "group size"));
    for (auto& idx : part) idx = read_value<std::size_t>(is, "group index");
  }
  GroupStructure groups(cols, std::move(parts));

  ProblemInstance inst =
      constraint == "lorentzian"
          ? make_lorentzian_instance(std::move(a), std::move(b), std::move(groups), mu, phi, sigma,
                                     radius, std::move(slater), std::move(truth))
          : make_convex_ball_instance(std::move(a), std::move(b), std::move(groups), mu, sigma,
                                      radius, std::move(slater), std::move(truth));
  inst.meta = meta;
  return inst;
}

void save_instance(const std::string& path, const ProblemInstance& inst) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "save_instance: cannot open " + path);
  write_instance(os, inst);
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "load_instance: cannot open " + path);
  return read_instance(is);
}

}  // namespace dcfeas
