#include "qdots/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "qdots/decoherence.hpp"
#include "qdots/measurement.hpp"
#include "qdots/single_qubit.hpp"
#include "qdots/spectral.hpp"
#include "qdots/two_qubit.hpp"

namespace qdots::scenario {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::Config, (path.empty() ? std::string("config") : path) + ": " + msg);
}

// A json node together with its dotted path, for error messages.
class Field {
 public:
  Field(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const json& raw() const { return *j_; }
  const std::string& path() const { return path_; }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Field at(const std::string& key) const {
    if (!j_->is_object()) config_error(path_, "expected an object");
    if (!j_->contains(key)) config_error(child(key), "missing required field");
    return {(*j_)[key], child(key)};
  }
  Field at(std::size_t i) const { return {(*j_)[i], path_ + "[" + std::to_string(i) + "]"}; }

  std::optional<Field> opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  void require_object() const {
    if (!j_->is_object()) config_error(path_, "expected an object");
  }
  std::size_t array_size() const {
    if (!j_->is_array()) config_error(path_, "expected an array");
    return j_->size();
  }

  double number() const {
    if (!j_->is_number()) config_error(path_, "expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) config_error(path_, "must be finite");
    return v;
  }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  double positive(const std::string& key) const {
    const double v = at(key).number();
    if (!(v > 0.0)) config_error(child(key), "must be > 0");
    return v;
  }
  int integer() const {
    if (!j_->is_number_integer()) config_error(path_, "expected an integer");
    return j_->get<int>();
  }
  std::string string() const {
    if (!j_->is_string()) config_error(path_, "expected a string");
    return j_->get<std::string>();
  }

  // Rejects keys outside the allowed set, which catches typos early.
  void only(std::initializer_list<const char*> allowed) const {
    require_object();
    for (const auto& item : j_->items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; })) {
        config_error(child(item.key()), "unknown field");
      }
    }
  }

 private:
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* j_;
  std::string path_;
};

// ---- parsing helpers ------------------------------------------------------

struct Window {
  double t0 = 0.0;
  double t1 = 0.0;
};

Signal parse_signal(const Field& f, const std::optional<Window>& w) {
  if (f.raw().is_number()) return Signal(f.number());
  f.require_object();
  const std::string kind = f.at("kind").string();
  if (kind == "constant") {
    f.only({"kind", "value"});
    return Signal(f.at("value").number());
  }
  if (kind == "sinusoid") {
    f.only({"kind", "amp", "omega", "phase", "offset"});
    return Signal::sinusoid(f.at("amp").number(), f.at("omega").number(), f.number_or("phase", 0.0),
                            f.number_or("offset", 0.0));
  }
  if (kind == "table") {
    f.only({"kind", "t", "v"});
    const Field ft = f.at("t");
    const Field fv = f.at("v");
    const std::size_t n = ft.array_size();
    if (n < 2) config_error(ft.path(), "needs at least two points");
    if (fv.array_size() != n) config_error(fv.path(), "length differs from t");
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = ft.at(i).number();
      v[i] = fv.at(i).number();
      if (i > 0 && !(t[i] > t[i - 1])) config_error(ft.at(i).path(), "times must increase strictly");
    }
    if (w && (t.front() > w->t0 || t.back() < w->t1)) {
      config_error(ft.path(), "table does not cover the simulated time window");
    }
    return Signal::table(std::move(t), std::move(v));
  }
  config_error(f.at("kind").path(), "unknown signal kind '" + kind + "'");
}

// amp * exp(i (omega t + phase))
ComplexSignal phasor(double amp, double omega, double phase) {
  return {Signal::sinusoid(amp, omega, phase + 0.5 * std::numbers::pi), Signal::sinusoid(amp, omega, phase)};
}

ComplexSignal parse_complex_signal(const Field& f, const std::optional<Window>& w) {
  if (f.raw().is_number()) return ComplexSignal(f.number());
  if (f.raw().is_array()) {
    if (f.array_size() != 2) config_error(f.path(), "expected [re, im]");
    return ComplexSignal(Complex(f.at(0).number(), f.at(1).number()));
  }
  f.require_object();
  if (f.has("kind") && f.at("kind").string() == "phasor") {
    f.only({"kind", "amp", "omega", "phase"});
    return phasor(f.at("amp").number(), f.at("omega").number(), f.number_or("phase", 0.0));
  }
  if (f.has("kind")) return ComplexSignal(parse_signal(f, w));
  f.only({"re", "im"});
  const Signal re = f.has("re") ? parse_signal(f.at("re"), w) : Signal(0.0);
  const Signal im = f.has("im") ? parse_signal(f.at("im"), w) : Signal(0.0);
  return {re, im};
}

Complex parse_complex(const Field& f) {
  if (f.raw().is_number()) return {f.number(), 0.0};
  if (f.raw().is_array() && f.array_size() == 2) return {f.at(0).number(), f.at(1).number()};
  config_error(f.path(), "expected a number or [re, im]");
}

template <int N>
Vec<N> parse_amplitudes(const Field& f) {
  if (f.array_size() != static_cast<std::size_t>(N)) {
    config_error(f.path(), "expected " + std::to_string(N) + " amplitudes");
  }
  Vec<N> v;
  for (int k = 0; k < N; ++k) v(k) = parse_complex(f.at(k));
  const double n = v.norm();
  if (!(n > 0.0)) config_error(f.path(), "amplitudes are all zero");
  return v / n;
}

template <int N>
Vec<N> unit(int k) {
  Vec<N> v = Vec<N>::Zero();
  v(k) = 1.0;
  return v;
}

QubitParams parse_qubit(const Field& f, const std::optional<Window>& w) {
  f.only({"ep1", "ep2", "ts", "alpha", "initial"});
  QubitParams p;
  p.ep1 = parse_signal(f.at("ep1"), w);
  p.ep2 = parse_signal(f.at("ep2"), w);
  p.ts_mag = parse_signal(f.at("ts"), w);
  p.alpha = f.has("alpha") ? parse_signal(f.at("alpha"), w) : Signal(0.0);
  return p;
}

struct StaticQubit {
  double ep1, ep2, ts, alpha;
};

StaticQubit parse_static_qubit(const Field& f) {
  f.only({"ep1", "ep2", "ts", "alpha"});
  return {f.at("ep1").number(), f.at("ep2").number(), f.at("ts").number(), f.number_or("alpha", 0.0)};
}

DotGeometry parse_geometry(const Field& f) {
  f.only({"kind", "a", "b", "d", "d1", "d2", "d3", "k"});
  DotGeometry g;
  const std::string kind = f.at("kind").string();
  if (kind == "parallel") {
    g.kind = Geometry::Parallel;
  } else if (kind == "collinear") {
    g.kind = Geometry::Collinear;
  } else if (kind == "perpendicular") {
    g.kind = Geometry::Perpendicular;
  } else {
    config_error(f.at("kind").path(), "expected parallel, collinear or perpendicular");
  }
  g.a = f.number_or("a", g.a);
  g.b = f.number_or("b", g.b);
  g.d = f.number_or("d", g.d);
  g.d1 = f.number_or("d1", g.d1);
  g.d2 = f.number_or("d2", g.d2);
  g.d3 = f.number_or("d3", g.d3);
  g.coulomb_k = f.number_or("k", g.coulomb_k);
  if (g.a < 0.0) config_error(f.path() + ".a", "must be >= 0");
  if (g.b < 0.0) config_error(f.path() + ".b", "must be >= 0");
  for (auto [v, name] : {std::pair{g.d, "d"}, {g.d1, "d1"}, {g.d2, "d2"}, {g.d3, "d3"}}) {
    if (!(v > 0.0)) config_error(f.path() + "." + name, "must be > 0");
  }
  return g;
}

Couplings parse_couplings(const Field& params) {
  if (params.has("couplings")) {
    if (params.has("geometry")) config_error(params.path() + ".couplings", "give either couplings or geometry");
    const Field c = params.at("couplings");
    c.only({"ec11", "ec12", "ec21", "ec22"});
    return {c.at("ec11").number(), c.at("ec12").number(), c.at("ec21").number(), c.at("ec22").number()};
  }
  return coulomb_couplings(parse_geometry(params.at("geometry")));
}

// ---- time grid and sampling ------------------------------------------------

struct Steps {
  int n = 1;
  double h = 0.0;
  int stride = 1;

  bool sampled(int i) const { return i % stride == 0 || i == n; }
};

Steps make_steps(const TimeSpec& t) {
  Steps s;
  s.n = step_count(t.t0, t.t_max, t.dt);
  s.h = (t.t_max - t.t0) / s.n;
  s.stride = t.sample_stride;
  return s;
}

// exp(-i H tau) for a fixed H, reusing one eigendecomposition.
template <int N>
class FixedPropagator {
 public:
  explicit FixedPropagator(const Mat<N>& h) : es_(eig_hermitian<N>(h)) {}
  Vec<N> apply(const Vec<N>& psi, double tau) const {
    Vec<N> phases;
    for (int k = 0; k < N; ++k) phases(k) = std::exp(-kI * (es_.values(k) * tau));
    return es_.vectors * (phases.asDiagonal() * (es_.vectors.adjoint() * psi));
  }

 private:
  EigenSystem<N> es_;
};

// Samples psi(t) at every sampled step, exactly for constant H and by RK4 otherwise.
template <int N, class HFn>
void propagate(const TimeSpec& ts, const Vec<N>& psi0, bool constant, HFn h,
               const std::function<void(double, const Vec<N>&)>& record) {
  const Steps st = make_steps(ts);
  record(ts.t0, psi0);
  if (constant) {
    const FixedPropagator<N> u(h(ts.t0));
    for (int i = 1; i <= st.n; ++i) {
      if (st.sampled(i)) record(ts.t0 + i * st.h, u.apply(psi0, i * st.h));
    }
    return;
  }
  const auto rhs = schroedinger_rhs<N>(h);
  Vec<N> psi = psi0;
  for (int i = 1; i <= st.n; ++i) {
    psi = rk4_step(rhs, psi, ts.t0 + (i - 1) * st.h, st.h);
    if (st.sampled(i)) record(ts.t0 + i * st.h, psi);
  }
}

class Table {
 public:
  explicit Table(std::vector<std::string> names) {
    series_.names = std::move(names);
    series_.columns.resize(series_.names.size());
  }
  void add(std::initializer_list<double> row) { add(std::vector<double>(row)); }
  void add(const std::vector<double>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!std::isfinite(row[k])) throw Error(ErrorKind::NonFinite, "non-finite value in column " + series_.names[k]);
      series_.columns[k].push_back(row[k]);
    }
  }
  TimeSeries take() { return std::move(series_); }

 private:
  TimeSeries series_;
};

ojson omega_or_null(const TimeSeries& s, const std::string& column) {
  const auto w = oscillation_omega(s.column("t"), s.column(column));
  return w ? ojson(*w) : ojson(nullptr);
}

std::optional<Window> window_of(const Scenario& s) { return Window{s.time.t0, s.time.t_max}; }

// ---- kinds ----------------------------------------------------------------

RunResult run_single_qubit(const Scenario& s) {
  const Field p(s.params, "params");
  const QubitParams qp = parse_qubit(p, window_of(s));
  Vec<2> psi0 = unit<2>(0);
  if (p.has("initial")) {
    const Field f = p.at("initial");
    if (f.raw().is_string()) {
      const std::string label = f.string();
      const EigenCoeffs e = eigencoeffs(qp, s.time.t0);
      if (label == "x1") {
        psi0 = unit<2>(0);
      } else if (label == "x2") {
        psi0 = unit<2>(1);
      } else if (label == "E1") {
        psi0 << e.a, e.b;
      } else if (label == "E2") {
        psi0 << e.c, e.d;
      } else {
        config_error(f.path(), "expected x1, x2, E1, E2 or amplitudes");
      }
    } else {
      psi0 = parse_amplitudes<2>(f);
    }
  }
  const bool constant = qp.ep1.is_constant() && qp.ep2.is_constant() && qp.ts_mag.is_constant() &&
                        qp.alpha.is_constant();
  Table table({"t", "p_x1", "p_x2", "p_E1", "p_E2", "phase_x1", "phase_x2"});
  Vec<2> last = psi0;
  propagate<2>(s.time, psi0, constant, [&qp](double t) { return build_h2(qp, t); },
               [&](double t, const Vec<2>& psi) {
                 const StateVector2 en = to_energy_basis({psi, Basis::Position}, eigencoeffs(qp, t));
                 table.add({t, std::norm(psi(0)), std::norm(psi(1)), std::norm(en.amps(0)), std::norm(en.amps(1)),
                            std::arg(psi(0)), std::arg(psi(1))});
                 last = psi;
               });
  RunResult r{s.kind, table.take(), {}};
  const EigenCoeffs e0 = eigencoeffs(qp, s.time.t0);
  r.summary["E1"] = e0.E1;
  r.summary["E2"] = e0.E2;
  r.summary["omega_p_x1"] = omega_or_null(r.series, "p_x1");
  r.summary["final_norm"] = last.norm();
  return r;
}

RunResult run_rabi(const Scenario& s) {
  const Field p(s.params, "params");
  p.only({"qubit", "e1", "e2", "e12", "method", "initial"});
  const StaticQubit q = parse_static_qubit(p.at("qubit"));
  const EigenCoeffs basis = eigencoeffs(q.ep1, q.ep2, q.ts, q.alpha);
  const auto w = window_of(s);
  const Signal e1 = p.has("e1") ? parse_signal(p.at("e1"), w) : Signal(basis.E1);
  const Signal e2 = p.has("e2") ? parse_signal(p.at("e2"), w) : Signal(basis.E2);
  const ComplexSignal e12 = p.has("e12") ? parse_complex_signal(p.at("e12"), w) : ComplexSignal(0.0);
  const std::string method = p.has("method") ? p.at("method").string() : "numeric";
  if (method != "numeric" && method != "closed_form") {
    config_error(p.path() + ".method", "expected numeric or closed_form");
  }
  Vec<2> c0 = unit<2>(0);
  if (p.has("initial")) {
    const Field f = p.at("initial");
    if (f.raw().is_string()) {
      const std::string label = f.string();
      if (label == "E1") {
        c0 = unit<2>(0);
      } else if (label == "E2") {
        c0 = unit<2>(1);
      } else if (label == "x1" || label == "x2") {
        Vec<2> x = unit<2>(label == "x1" ? 0 : 1);
        c0 = to_energy_basis({x, Basis::Position}, basis).amps;
      } else {
        config_error(f.path(), "expected E1, E2, x1, x2 or amplitudes");
      }
    } else {
      c0 = parse_amplitudes<2>(f);
    }
  }
  Table table({"t", "p_E1", "p_E2", "p_x1", "p_x2", "phase_x1", "phase_x2"});
  Vec<2> last = c0;
  const auto record = [&](double t, const Vec<2>& c) {
    const StateVector2 x = to_position_basis({c, Basis::Energy}, basis);
    table.add({t, std::norm(c(0)), std::norm(c(1)), std::norm(x.amps(0)), std::norm(x.amps(1)), std::arg(x.amps(0)),
               std::arg(x.amps(1))});
    last = c;
  };
  if (method == "closed_form") {
    const Steps st = make_steps(s.time);
    record(s.time.t0, c0);
    for (int i = 1; i <= st.n; ++i) {
      if (!st.sampled(i)) continue;
      const double t = s.time.t0 + i * st.h;
      record(t, rabi_evolution_matrix(e1, e2, e12, s.time.t0, t) * c0);
    }
  } else {
    const auto h = [&](double t) {
      Mat<2> m;
      const Complex z = e12(t);
      m << e1(t), z, std::conj(z), e2(t);
      return m;
    };
    propagate<2>(s.time, c0, e1.is_constant() && e2.is_constant() && e12.is_constant(), h, record);
  }
  RunResult r{s.kind, table.take(), {}};
  r.summary["E1"] = basis.E1;
  r.summary["E2"] = basis.E2;
  r.summary["omega_p_E1"] = omega_or_null(r.series, "p_E1");
  r.summary["final_norm"] = last.norm();
  return r;
}

// Labels shared by the swap and cnot control registers.
Vec<4> parse_pair_initial(const Field& f, const Mat<4>& h) {
  if (!f.raw().is_string()) return parse_amplitudes<4>(f);
  const std::string label = f.string();
  const double r2 = 1.0 / std::sqrt(2.0);
  Vec<4> v = Vec<4>::Zero();
  if (label == "V1n") {
    v << -r2, 0.0, 0.0, r2;
  } else if (label == "V2n") {
    v << 0.0, -r2, r2, 0.0;
  } else if (label == "x22" || label == "x21" || label == "x12" || label == "x11") {
    static const std::map<std::string, int> idx{{"x22", 0}, {"x21", 1}, {"x12", 2}, {"x11", 3}};
    v = unit<4>(idx.at(label));
  } else if (label.size() == 2 && label[0] == 'E' && label[1] >= '1' && label[1] <= '4') {
    v = eig_hermitian<4>(h).vectors.col(label[1] - '1');
  } else {
    config_error(f.path(), "expected V1n, V2n, x22, x21, x12, x11, E1..E4 or amplitudes");
  }
  return v;
}

SwapParams parse_swap_params(const Field& p) {
  SwapParams sp;
  sp.vs = p.number_or("vs", 0.0);
  sp.tu = p.at("tu").number();
  sp.tl = p.at("tl").number();
  sp.couplings = parse_couplings(p);
  return sp;
}

std::vector<double> occupancy_row(const Vec<4>& psi) {
  const Occupancy o = occupancy({psi, Basis::Position});
  return {o.p1, o.p2, o.p1p, o.p2p};
}

RunResult run_swap(const Scenario& s) {
  const Field p(s.params, "params");
  p.only({"geometry", "couplings", "vs", "tu", "tl", "site", "initial"});
  const SwapParams sp = parse_swap_params(p);
  Mat<4> h = build_h4(sp);
  if (p.has("site")) {
    const Field f = p.at("site");
    if (f.array_size() != 4) config_error(f.path(), "expected four site energies");
    h = build_h4(sp, {f.at(0).number(), f.at(1).number(), f.at(2).number(), f.at(3).number()});
  }
  const Vec<4> psi0 = p.has("initial") ? parse_pair_initial(p.at("initial"), h) : unit<4>(0);
  Table table({"t", "p_x22", "p_x21", "p_x12", "p_x11", "p_U1", "p_U2", "p_L1", "p_L2", "concurrence"});
  Vec<4> last = psi0;
  propagate<4>(s.time, psi0, true, [&h](double) { return h; }, [&](double t, const Vec<4>& psi) {
    std::vector<double> row{t};
    for (int k = 0; k < 4; ++k) row.push_back(std::norm(psi(k)));
    for (double v : occupancy_row(psi)) row.push_back(v);
    row.push_back(is_factorizable({psi, Basis::Position}).concurrence);
    table.add(row);
    last = psi;
  });
  RunResult r{s.kind, table.take(), {}};
  const EigenSystem<4> es = eig_hermitian<4>(h);
  r.summary["energies"] = std::vector<double>(es.values.data(), es.values.data() + 4);
  r.summary["pair_gap"] = swap_pair_gap(h);
  r.summary["couplings"] = {{"ec11", sp.couplings.ec11},
                            {"ec12", sp.couplings.ec12},
                            {"ec21", sp.couplings.ec21},
                            {"ec22", sp.couplings.ec22}};
  r.summary["omega_p_U1"] = omega_or_null(r.series, "p_U1");
  r.summary["final_norm"] = last.norm();
  r.summary["final_concurrence"] = is_factorizable({last, Basis::Position}).concurrence;
  return r;
}

Vec<2> parse_single_initial(const Field& f) {
  if (!f.raw().is_string()) return parse_amplitudes<2>(f);
  const std::string label = f.string();
  if (label == "x1") return unit<2>(0);
  if (label == "x2") return unit<2>(1);
  config_error(f.path(), "expected x1, x2 or amplitudes");
}

RunResult run_cnot(const Scenario& s) {
  const Field p(s.params, "params");
  p.only({"geometry", "control", "target"});
  const DotGeometry g = parse_geometry(p.at("geometry"));
  const Field c = p.at("control");
  c.only({"vs", "tu", "tl", "initial"});
  SwapParams sp;
  sp.vs = c.number_or("vs", 0.0);
  sp.tu = c.at("tu").number();
  sp.tl = c.at("tl").number();
  sp.couplings = coulomb_couplings(g);
  const Field tg = p.at("target");
  tg.only({"vs", "ts", "initial"});
  const double vs2 = tg.number_or("vs", 0.0);
  const double t2 = tg.at("ts").number();
  const Vec<4> c0 = c.has("initial") ? parse_pair_initial(c.at("initial"), build_h4(sp)) : unit<4>(0);
  const Vec<2> x0 = tg.has("initial") ? parse_single_initial(tg.at("initial")) : unit<2>(0);
  const auto samples = cnot_coupled_run(sp, {c0, Basis::Position}, g, vs2, t2, {x0, Basis::Position}, s.time.t0,
                                        s.time.t_max, s.time.dt, s.time.sample_stride);
  Table table({"t", "p_U1", "p_U2", "p_L1", "p_L2", "p_x1", "p_x2", "phase_x1", "phase_x2"});
  for (const CnotSample& smp : samples) {
    std::vector<double> row{smp.t};
    for (double v : occupancy_row(smp.control.amps)) row.push_back(v);
    const Vec<2>& x = smp.target.amps;
    row.insert(row.end(), {std::norm(x(0)), std::norm(x(1)), std::arg(x(0)), std::arg(x(1))});
    table.add(row);
  }
  RunResult r{s.kind, table.take(), {}};
  r.summary["control_final_norm"] = samples.back().control.amps.norm();
  r.summary["target_final_norm"] = samples.back().target.amps.norm();
  r.summary["omega_control_p_U1"] = omega_or_null(r.series, "p_U1");
  r.summary["omega_target_p_x1"] = omega_or_null(r.series, "p_x1");
  return r;
}

struct DecoherenceSetup {
  EigenCoeffs qa;
  EigenCoeffs qb;
  NodeDistances dist;
  double k = 1.0;
  ComplexSignal e12a;
  ComplexSignal e12b;
  Vec<4> psi0;

  Mat<4> hdec() const { return decoherence_matrix(qa, qb, dist, k); }
  Mat<4> h0(double t) const { return build_h0_resonant(qa.E1, qa.E2, qb.E1, qb.E2, e12a(t), e12b(t)); }
};

DecoherenceSetup parse_decoherence(const Scenario& s) {
  const Field p(s.params, "params");
  p.only({"qubit_a", "qubit_b", "geometry", "k", "e12a", "e12b", "initial"});
  DecoherenceSetup d;
  const StaticQubit a = parse_static_qubit(p.at("qubit_a"));
  const StaticQubit b = parse_static_qubit(p.at("qubit_b"));
  d.qa = eigencoeffs(a.ep1, a.ep2, a.ts, a.alpha);
  d.qb = eigencoeffs(b.ep1, b.ep2, b.ts, b.alpha);
  const DotGeometry g = parse_geometry(p.at("geometry"));
  d.dist = node_distances(g);
  d.k = p.number_or("k", g.coulomb_k);
  const auto w = window_of(s);
  d.e12a = p.has("e12a") ? parse_complex_signal(p.at("e12a"), w) : ComplexSignal(0.0);
  d.e12b = p.has("e12b") ? parse_complex_signal(p.at("e12b"), w) : ComplexSignal(0.0);
  d.psi0 = unit<4>(0);
  if (p.has("initial")) {
    const Field f = p.at("initial");
    if (f.raw().is_string()) {
      static const std::map<std::string, int> idx{{"E11", 0}, {"E12", 1}, {"E21", 2}, {"E22", 3}};
      const auto it = idx.find(f.string());
      if (it == idx.end()) config_error(f.path(), "expected E11, E12, E21, E22 or amplitudes");
      d.psi0 = unit<4>(it->second);
    } else {
      d.psi0 = parse_amplitudes<4>(f);
    }
  }
  return d;
}

RunResult run_decoherence(const Scenario& s) {
  const DecoherenceSetup d = parse_decoherence(s);
  const Mat<4> hdec = d.hdec();
  const DensityMatrix4 rho0 = pure_density<4>({d.psi0, Basis::Energy});
  const DensityMode mode = s.paper_factorized ? DensityMode::Factorized : DensityMode::Exact;
  const auto samples = evolve_density(
      rho0, [&d](double t) { return d.h0(t); }, [&hdec](double) { return hdec; }, s.time.t0, s.time.t_max,
      s.time.dt, mode, s.time.sample_stride);
  std::vector<std::string> names{"t", "p_E1", "p_E2", "p_E3", "p_E4"};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const std::string ij = std::to_string(i + 1) + std::to_string(j + 1);
      names.push_back("re_rho_" + ij);
      names.push_back("im_rho_" + ij);
    }
  }
  names.insert(names.end(), {"trace", "purity", "purity_A"});
  Table table(names);
  for (const DensitySample& smp : samples) {
    std::vector<double> row{smp.t};
    for (int k = 0; k < 4; ++k) row.push_back(smp.rho(k, k).real());
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) {
        row.push_back(smp.rho(i, j).real());
        row.push_back(smp.rho(i, j).imag());
      }
    }
    const Mat<2> ra = partial_trace({smp.rho, Basis::Energy}, Keep::A).rho;
    row.insert(row.end(), {smp.rho.trace().real(), purity(smp.rho), (ra * ra).trace().real()});
    table.add(row);
  }
  RunResult r{s.kind, table.take(), {}};
  const auto e = renormalized_energies(d.qa, d.qb, d.dist, d.k);
  r.summary["renormalized_energies"] = std::vector<double>(e.begin(), e.end());
  r.summary["mode"] = s.paper_factorized ? "factorized" : "exact";
  const auto& f = r.series;
  r.summary["final_trace"] = f.column("trace").back();
  r.summary["final_purity"] = f.column("purity").back();
  r.summary["final_purity_A"] = f.column("purity_A").back();
  r.summary["omega_p_E1"] = omega_or_null(f, "p_E1");
  return r;
}

WellSpec parse_well(const Field& f) {
  f.only({"kind", "omega", "mass", "center", "width", "potential", "max_level", "grid"});
  WellSpec w;
  const std::string kind = f.at("kind").string();
  if (kind == "harmonic") {
    w.kind = WellKind::Harmonic;
    w.omega = f.has("omega") ? f.positive("omega") : w.omega;
  } else if (kind == "box") {
    w.kind = WellKind::Box;
    w.width = f.has("width") ? f.positive("width") : w.width;
  } else if (kind == "numeric") {
    w.kind = WellKind::Numeric;
    w.width = f.has("width") ? f.positive("width") : w.width;
    const Signal v = parse_signal(f.at("potential"), std::nullopt);
    w.potential = [v](double x) { return v(x); };
    if (!f.has("grid")) config_error(f.path() + ".grid", "numeric wells need an explicit grid");
  } else {
    config_error(f.at("kind").path(), "expected harmonic, box or numeric");
  }
  w.mass = f.has("mass") ? f.positive("mass") : w.mass;
  w.center = f.number_or("center", 0.0);
  if (f.has("max_level")) {
    w.max_level = f.at("max_level").integer();
    if (w.max_level < 0) config_error(f.path() + ".max_level", "must be >= 0");
  }
  if (f.has("grid")) {
    const Field g = f.at("grid");
    g.only({"x_min", "x_max", "n"});
    w.grid = {g.at("x_min").number(), g.at("x_max").number(), g.at("n").integer()};
    if (!(w.grid.x_max > w.grid.x_min)) config_error(g.path() + ".x_max", "must exceed x_min");
    if (w.grid.n < 5 || (w.grid.n - 1) % 4 != 0) config_error(g.path() + ".n", "must be 4k+1 with k >= 1");
  }
  return w;
}

struct SpectralSetup {
  ConfinementBasis a;
  ConfinementBasis b;
  Eigen::MatrixXd w;
  Eigen::MatrixXd h;
  Eigen::VectorXcd q0;
};

SpectralSetup build_spectral(const Scenario& s) {
  const Field p(s.params, "params");
  p.only({"well_a", "well_b", "e2", "d_reg", "offset", "initial"});
  const WellSpec wa = parse_well(p.at("well_a"));
  const WellSpec wb = p.has("well_b") ? parse_well(p.at("well_b")) : wa;
  const double e2 = p.number_or("e2", 1.0);
  const double d_reg = p.has("d_reg") ? p.positive("d_reg") : 1e-2 * well_length(wa);
  const double offset = p.at("offset").number();
  SpectralSetup out;
  out.a = build_basis(wa);
  out.b = build_basis(wb);
  const int na = out.a.levels();
  const int nb = out.b.levels();
  out.q0 = Eigen::VectorXcd::Zero(na * nb);
  if (p.has("initial")) {
    const Field f = p.at("initial");
    const std::size_t n = f.array_size();
    for (std::size_t i = 0; i < n; ++i) {
      const Field m = f.at(i);
      m.only({"n", "m", "re", "im"});
      const int ln = m.at("n").integer();
      const int lm = m.at("m").integer();
      if (ln < 0 || ln >= na) config_error(m.path() + ".n", "level out of range");
      if (lm < 0 || lm >= nb) config_error(m.path() + ".m", "level out of range");
      out.q0(ln * nb + lm) += Complex(m.number_or("re", 0.0), m.number_or("im", 0.0));
    }
    if (!(out.q0.norm() > 0.0)) config_error(f.path(), "amplitudes are all zero");
    out.q0 /= out.q0.norm();
  } else {
    out.q0(0) = 1.0;
  }
  out.w = interaction_elements(out.a, out.b, soft_coulomb(e2, d_reg), offset);
  out.h = composite_hamiltonian(out.a, out.b, out.w);
  return out;
}

RunResult run_spectral(const Scenario& s) {
  const SpectralSetup sp = build_spectral(s);
  const int na = sp.a.levels();
  const int nb = sp.b.levels();
  std::vector<std::string> names{"t"};
  for (int n = 0; n < na; ++n) {
    for (int m = 0; m < nb; ++m) names.push_back("p_q" + std::to_string(n) + "_" + std::to_string(m));
  }
  names.insert(names.end(), {"norm", "energy", "entropy"});
  Table table(names);
  const Eigen::MatrixXcd hc = sp.h.cast<Complex>();
  evolve_modes(
      sp.h, sp.q0, s.time.t0, s.time.t_max, s.time.dt,
      [&](double t, const Eigen::VectorXcd& q) {
        std::vector<double> row{t};
        for (int k = 0; k < q.size(); ++k) row.push_back(std::norm(q(k)));
        row.push_back(q.norm());
        row.push_back(q.dot(hc * q).real());
        row.push_back(entanglement_entropy(q / q.norm(), na, nb));
        table.add(row);
      },
      s.time.sample_stride);
  RunResult r{s.kind, table.take(), {}};
  const auto& energy = r.series.column("energy");
  r.summary["mode_energies_a"] = std::vector<double>(sp.a.energies.data(), sp.a.energies.data() + na);
  r.summary["mode_energies_b"] = std::vector<double>(sp.b.energies.data(), sp.b.energies.data() + nb);
  r.summary["max_abs_w"] = sp.w.cwiseAbs().maxCoeff();
  r.summary["final_norm"] = r.series.column("norm").back();
  r.summary["energy_drift"] = std::abs(energy.back() - energy.front());
  r.summary["final_entropy"] = r.series.column("entropy").back();
  return r;
}

const std::map<std::string, std::function<RunResult(const Scenario&)>>& runners() {
  static const std::map<std::string, std::function<RunResult(const Scenario&)>> m{
      {"single-qubit", run_single_qubit}, {"rabi", run_rabi},       {"swap", run_swap},
      {"cnot", run_cnot},                 {"decoherence", run_decoherence}, {"spectral", run_spectral}};
  return m;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

// Numeric leaves of a summary as (dotted key, value); null leaves stay empty.
void flatten(const ojson& j, const std::string& prefix, std::vector<std::pair<std::string, ojson>>& out) {
  if (j.is_object()) {
    for (const auto& item : j.items()) flatten(item.value(), prefix.empty() ? item.key() : prefix + "." + item.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "_" + std::to_string(i + 1), out);
  } else if (j.is_number() || j.is_null()) {
    out.emplace_back(prefix, j);
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? 1 : 0);
  }
}

json* resolve_axis(json& config, const std::string& axis) {
  if (axis.empty()) config_error("axis", "empty parameter path");
  json* node = &config;
  std::string path;
  std::stringstream ss(axis);
  std::string key;
  while (std::getline(ss, key, '.')) {
    path = path.empty() ? key : path + "." + key;
    if (!node->is_object() || !node->contains(key)) config_error(path, "axis does not resolve in the config");
    node = &(*node)[key];
  }
  if (!node->is_number()) config_error(axis, "axis must name a numeric scalar");
  return node;
}

}  // namespace

const std::vector<double>& TimeSeries::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == name) return columns[k];
  }
  throw Error(ErrorKind::InvalidArgument, "no column named " + name);
}

Scenario parse_scenario(const nlohmann::json& config, const RunOptions& opts) {
  const Field root(config, "");
  root.only({"schema_version", "kind", "params", "time", "outputs"});
  const int version = root.at("schema_version").integer();
  if (version != kSchemaVersion) config_error("schema_version", "unsupported version " + std::to_string(version));
  Scenario s;
  s.kind = root.at("kind").string();
  if (!runners().contains(s.kind)) {
    config_error("kind", "unknown scenario kind '" + s.kind + "'");
  }
  const Field t = root.at("time");
  t.only({"t0", "t_max", "dt", "sample_stride"});
  s.time.t0 = t.number_or("t0", 0.0);
  s.time.t_max = t.at("t_max").number();
  s.time.dt = t.at("dt").number();
  if (t.has("sample_stride")) s.time.sample_stride = t.at("sample_stride").integer();
  if (!(s.time.dt > 0.0)) config_error("time.dt", "must be > 0");
  if (!(s.time.t_max > s.time.t0)) config_error("time.t_max", "must exceed time.t0");
  if (s.time.sample_stride < 1) config_error("time.sample_stride", "must be >= 1");
  if ((s.time.t_max - s.time.t0) / s.time.dt > 1e9) config_error("time.dt", "too many steps for the time window");
  s.params = root.has("params") ? root.at("params").raw() : json::object();
  Field(s.params, "params").require_object();
  if (root.has("outputs")) {
    const Field o = root.at("outputs");
    for (std::size_t i = 0; i < o.array_size(); ++i) s.outputs.push_back(o.at(i).string());
  }
  s.paper_factorized = opts.paper_factorized;
  if (s.paper_factorized && s.kind != "decoherence") {
    config_error("kind", "--paper-factorized applies to decoherence scenarios only");
  }
  s.seed = opts.seed.value_or(0);
  return s;
}

RunResult run_scenario(const Scenario& s) {
  const auto it = runners().find(s.kind);
  if (it == runners().end()) config_error("kind", "unknown scenario kind '" + s.kind + "'");
  RunResult r;
  try {
    r = it->second(s);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(e.kind(), s.kind + " scenario: " + e.what());
  }
  if (!s.outputs.empty()) {
    TimeSeries kept;
    kept.names.push_back("t");
    kept.columns.push_back(r.series.columns.front());
    for (std::size_t i = 0; i < s.outputs.size(); ++i) {
      const auto& name = s.outputs[i];
      const auto pos = std::find(r.series.names.begin(), r.series.names.end(), name);
      if (pos == r.series.names.end()) {
        config_error("outputs[" + std::to_string(i) + "]", "unknown column '" + name + "' for " + s.kind);
      }
      if (name == "t") continue;
      kept.names.push_back(name);
      kept.columns.push_back(r.series.columns[pos - r.series.names.begin()]);
    }
    r.series = std::move(kept);
  }
  return r;
}

std::optional<double> oscillation_omega(const std::vector<double>& t, const std::vector<double>& p) {
  if (t.size() != p.size() || p.size() < 3) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
  if (*hi - *lo < 1e-9) return std::nullopt;
  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= static_cast<double>(p.size());
  std::vector<double> crossings;
  for (std::size_t k = 0; k + 1 < p.size(); ++k) {
    const double f0 = p[k] - mean;
    const double f1 = p[k + 1] - mean;
    if (f0 < 0.0 && f1 >= 0.0) crossings.push_back(t[k] + (t[k + 1] - t[k]) * (-f0) / (f1 - f0));
  }
  if (crossings.size() < 2) return std::nullopt;
  const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return 2.0 * std::numbers::pi / period;
}

std::string to_csv(const RunResult& r) {
  std::string out = "# qdots timeseries v" + std::to_string(kOutputVersion) + " kind=" + r.kind + "\n";
  for (std::size_t k = 0; k < r.series.names.size(); ++k) out += (k ? "," : "") + r.series.names[k];
  out += "\n";
  for (std::size_t i = 0; i < r.series.rows(); ++i) {
    for (std::size_t k = 0; k < r.series.columns.size(); ++k) out += (k ? "," : "") + fmt(r.series.columns[k][i]);
    out += "\n";
  }
  return out;
}

nlohmann::ordered_json to_json(const RunResult& r) {
  ojson j;
  j["format"] = "qdots-timeseries";
  j["version"] = kOutputVersion;
  j["kind"] = r.kind;
  j["columns"] = r.series.names;
  ojson data = ojson::object();
  for (std::size_t k = 0; k < r.series.names.size(); ++k) data[r.series.names[k]] = r.series.columns[k];
  j["data"] = std::move(data);
  j["summary"] = r.summary;
  return j;
}

std::vector<double> parse_values(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) return {};
  const auto to_double = [&text](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.empty() || !std::isfinite(v)) {
      config_error("values", "cannot parse '" + tok + "' in '" + text + "'");
    }
    return v;
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) config_error("values", "range must be lo:hi:count");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const double count = to_double(parts[2]);
    if (count < 1 || count != std::floor(count)) config_error("values", "range count must be a positive integer");
    const int n = static_cast<int>(count);
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(tok));
  if (!s.empty() && s.back() == ',') config_error("values", "trailing comma");
  return out;
}

std::vector<SweepRow> sweep(const nlohmann::json& config, const std::string& axis, const std::vector<double>& values,
                            const RunOptions& opts, unsigned threads) {
  {
    json probe = config;
    resolve_axis(probe, axis);
  }
  std::vector<SweepRow> rows(values.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      SweepRow& row = rows[i];
      row.value = values[i];
      try {
        json c = config;
        *resolve_axis(c, axis) = values[i];
        row.summary = run_scenario(parse_scenario(c, opts)).summary;
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, values.size()));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  if (!values.empty()) worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
  std::vector<std::string> keys;
  std::set<std::string> seen;
  std::vector<std::vector<std::pair<std::string, ojson>>> flat(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].ok) continue;
    flatten(rows[i].summary, "", flat[i]);
    for (const auto& [k, v] : flat[i]) {
      if (seen.insert(k).second) keys.push_back(k);
    }
  }
  std::string out = "# qdots sweep v" + std::to_string(kOutputVersion) + " axis=" + axis + "\n";
  out += "value,status";
  for (const auto& k : keys) out += "," + k;
  out += ",error\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += fmt(rows[i].value) + (rows[i].ok ? ",ok" : ",failed");
    std::map<std::string, const ojson*> cell;
    for (const auto& [k, v] : flat[i]) cell[k] = &v;
    for (const auto& k : keys) {
      out += ",";
      const auto it = cell.find(k);
      if (it != cell.end() && it->second->is_number()) out += fmt(it->second->get<double>());
    }
    out += "," + csv_quote(rows[i].error) + "\n";
  }
  return out;
}

nlohmann::ordered_json sweep_json(const std::string& axis, const std::vector<SweepRow>& rows) {
  ojson j;
  j["format"] = "qdots-sweep";
  j["version"] = kOutputVersion;
  j["axis"] = axis;
  j["rows"] = ojson::array();
  for (const SweepRow& r : rows) {
    ojson row;
    row["value"] = r.value;
    row["status"] = r.ok ? "ok" : "failed";
    if (r.ok) {
      row["summary"] = r.summary;
    } else {
      row["error"] = r.error;
    }
    j["rows"].push_back(std::move(row));
  }
  return j;
}

namespace {

template <int N>
std::vector<double> values_of(const EigenSystem<N>& es) {
  return std::vector<double>(es.values.data(), es.values.data() + N);
}

ojson report_single(const Scenario& s) {
  const QubitParams qp = parse_qubit(Field(s.params, "params"), window_of(s));
  const double t = s.time.t0;
  const EigenCoeffs e = eigencoeffs(qp, t);
  const EigenSystem<2> num = eig_hermitian<2>(build_h2(qp, t));
  Vec<2> v1, v2;
  v1 << e.a, e.b;
  v2 << e.c, e.d;
  ojson j;
  j["t"] = t;
  j["closed_form"] = {{"E1", e.E1}, {"E2", e.E2}};
  j["numeric"] = values_of(num);
  j["max_energy_diff"] = std::max(std::abs(e.E1 - num.values(0)), std::abs(e.E2 - num.values(1)));
  j["fidelity"] = {fidelity<2>(v1, num.vectors.col(0)), fidelity<2>(v2, num.vectors.col(1))};
  return j;
}

ojson report_rabi(const Scenario& s) {
  const Field p(s.params, "params");
  const StaticQubit q = parse_static_qubit(p.at("qubit"));
  ojson j = report_single([&] {
    Scenario copy = s;
    copy.params = {{"ep1", q.ep1}, {"ep2", q.ep2}, {"ts", q.ts}, {"alpha", q.alpha}};
    return copy;
  }());
  return j;
}

ojson report_swap(const Scenario& s) {
  const Field p(s.params, "params");
  const SwapParams sp = parse_swap_params(p);
  const Mat<4> h = build_h4(sp);
  const EigenSystem<4> num = eig_hermitian<4>(h);
  ojson j;
  j["numeric"] = values_of(num);
  j["pair_gap"] = swap_pair_gap(h);
  const Couplings& c = sp.couplings;
  const bool symmetric = c.ec11 == c.ec22 && c.ec12 == c.ec21 && sp.tu == sp.tl && !p.has("site");
  if (!symmetric) {
    j["closed_form"] = nullptr;
    return j;
  }
  const SwapEigen cf = swap_eigensystem_symmetric(c.ec11, c.ec12, sp.tu, sp.vs);
  std::array<double, 4> sorted = cf.energies;
  std::sort(sorted.begin(), sorted.end());
  double diff = 0.0;
  double residual = 0.0;
  for (int k = 0; k < 4; ++k) {
    diff = std::max(diff, std::abs(sorted[k] - num.values(k)));
    residual = std::max(residual, (h * cf.vectors[k] - cf.energies[k] * cf.vectors[k]).norm());
  }
  j["closed_form"] = std::vector<double>(cf.energies.begin(), cf.energies.end());
  j["max_energy_diff"] = diff;
  j["max_residual"] = residual;
  return j;
}

ojson report_cnot(const Scenario& s) {
  const Field p(s.params, "params");
  const DotGeometry g = parse_geometry(p.at("geometry"));
  const Field c = p.at("control");
  SwapParams sp;
  sp.vs = c.number_or("vs", 0.0);
  sp.tu = c.at("tu").number();
  sp.tl = c.at("tl").number();
  sp.couplings = coulomb_couplings(g);
  ojson j;
  j["control_numeric"] = values_of(eig_hermitian<4>(build_h4(sp)));
  const Field tg = p.at("target");
  const double vs2 = tg.number_or("vs", 0.0);
  const EigenCoeffs e = eigencoeffs(vs2, vs2, tg.at("ts").number(), 0.0);
  j["target_closed_form"] = {e.E1, e.E2};
  return j;
}

ojson report_decoherence(const Scenario& s) {
  const DecoherenceSetup d = parse_decoherence(s);
  const auto e = renormalized_energies(d.qa, d.qb, d.dist, d.k);
  const Mat<4> h = d.h0(s.time.t0) + d.hdec();
  ojson j;
  j["renormalized_energies"] = std::vector<double>(e.begin(), e.end());
  j["numeric"] = values_of(eig_hermitian<4>(h));
  j["decoherence_hermiticity_defect"] = hermiticity_defect<4>(d.hdec());
  return j;
}

ojson report_spectral(const Scenario& s) {
  const SpectralSetup sp = build_spectral(s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sp.h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  ojson j;
  j["mode_energies_a"] = std::vector<double>(sp.a.energies.data(), sp.a.energies.data() + sp.a.levels());
  j["mode_energies_b"] = std::vector<double>(sp.b.energies.data(), sp.b.energies.data() + sp.b.levels());
  j["composite_numeric"] = std::vector<double>(ev.data(), ev.data() + ev.size());
  return j;
}

}  // namespace

nlohmann::ordered_json eigen_report(const Scenario& s) {
  static const std::map<std::string, std::function<ojson(const Scenario&)>> reports{
      {"single-qubit", report_single}, {"rabi", report_rabi},       {"swap", report_swap},
      {"cnot", report_cnot},           {"decoherence", report_decoherence}, {"spectral", report_spectral}};
  ojson j;
  j["format"] = "qdots-eigens";
  j["version"] = kOutputVersion;
  j["kind"] = s.kind;
  try {
    j["report"] = reports.at(s.kind)(s);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    throw Error(e.kind(), s.kind + " eigens: " + e.what());
  }
  return j;
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->kind() == ErrorKind::Config ? 2 : 3;
  if (dynamic_cast<const nlohmann::json::exception*>(&e) != nullptr) return 2;
  return 3;
}

}  // namespace qdots::scenario
