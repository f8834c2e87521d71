#include "laptime/tire/magic_formula.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "laptime/error.hpp"

namespace laptime::tire {
namespace {

constexpr double kEps = 1e-6;
// Speed below which rolling resistance fades out smoothly.
constexpr double kVeps = 0.1;

struct KeySpec {
  const char* name;
  double MfCoefficients::*field;
};

constexpr KeySpec kShapeKeys[] = {
    {"PCX1", &MfCoefficients::pcx1}, {"PDX1", &MfCoefficients::pdx1}, {"PDX2", &MfCoefficients::pdx2},
    {"PDX3", &MfCoefficients::pdx3}, {"PEX1", &MfCoefficients::pex1}, {"PEX2", &MfCoefficients::pex2},
    {"PEX3", &MfCoefficients::pex3}, {"PEX4", &MfCoefficients::pex4}, {"PKX1", &MfCoefficients::pkx1},
    {"PKX2", &MfCoefficients::pkx2}, {"PKX3", &MfCoefficients::pkx3}, {"PHX1", &MfCoefficients::phx1},
    {"PHX2", &MfCoefficients::phx2}, {"PVX1", &MfCoefficients::pvx1}, {"PVX2", &MfCoefficients::pvx2},
    {"RBX1", &MfCoefficients::rbx1}, {"RBX2", &MfCoefficients::rbx2}, {"RCX1", &MfCoefficients::rcx1},
    {"REX1", &MfCoefficients::rex1}, {"REX2", &MfCoefficients::rex2}, {"RHX1", &MfCoefficients::rhx1},
    {"QSX1", &MfCoefficients::qsx1}, {"QSX2", &MfCoefficients::qsx2}, {"QSX3", &MfCoefficients::qsx3},
    {"PCY1", &MfCoefficients::pcy1}, {"PDY1", &MfCoefficients::pdy1}, {"PDY2", &MfCoefficients::pdy2},
    {"PDY3", &MfCoefficients::pdy3}, {"PEY1", &MfCoefficients::pey1}, {"PEY2", &MfCoefficients::pey2},
    {"PEY3", &MfCoefficients::pey3}, {"PEY4", &MfCoefficients::pey4}, {"PKY1", &MfCoefficients::pky1},
    {"PKY2", &MfCoefficients::pky2}, {"PKY3", &MfCoefficients::pky3}, {"PHY1", &MfCoefficients::phy1},
    {"PHY2", &MfCoefficients::phy2}, {"PHY3", &MfCoefficients::phy3}, {"PVY1", &MfCoefficients::pvy1},
    {"PVY2", &MfCoefficients::pvy2}, {"PVY3", &MfCoefficients::pvy3}, {"PVY4", &MfCoefficients::pvy4},
    {"RBY1", &MfCoefficients::rby1}, {"RBY2", &MfCoefficients::rby2}, {"RBY3", &MfCoefficients::rby3},
    {"RCY1", &MfCoefficients::rcy1}, {"REY1", &MfCoefficients::rey1}, {"REY2", &MfCoefficients::rey2},
    {"RHY1", &MfCoefficients::rhy1}, {"RHY2", &MfCoefficients::rhy2}, {"RVY1", &MfCoefficients::rvy1},
    {"RVY2", &MfCoefficients::rvy2}, {"RVY3", &MfCoefficients::rvy3}, {"RVY4", &MfCoefficients::rvy4},
    {"RVY5", &MfCoefficients::rvy5}, {"RVY6", &MfCoefficients::rvy6}, {"QSY1", &MfCoefficients::qsy1},
    {"QSY2", &MfCoefficients::qsy2}, {"QSY3", &MfCoefficients::qsy3}, {"QSY4", &MfCoefficients::qsy4},
    {"QBZ1", &MfCoefficients::qbz1}, {"QBZ2", &MfCoefficients::qbz2}, {"QBZ3", &MfCoefficients::qbz3},
    {"QBZ4", &MfCoefficients::qbz4}, {"QBZ5", &MfCoefficients::qbz5}, {"QBZ9", &MfCoefficients::qbz9},
    {"QBZ10", &MfCoefficients::qbz10}, {"QCZ1", &MfCoefficients::qcz1}, {"QDZ1", &MfCoefficients::qdz1},
    {"QDZ2", &MfCoefficients::qdz2}, {"QDZ3", &MfCoefficients::qdz3}, {"QDZ4", &MfCoefficients::qdz4},
    {"QDZ6", &MfCoefficients::qdz6}, {"QDZ7", &MfCoefficients::qdz7}, {"QDZ8", &MfCoefficients::qdz8},
    {"QDZ9", &MfCoefficients::qdz9}, {"QEZ1", &MfCoefficients::qez1}, {"QEZ2", &MfCoefficients::qez2},
    {"QEZ3", &MfCoefficients::qez3}, {"QEZ4", &MfCoefficients::qez4}, {"QEZ5", &MfCoefficients::qez5},
    {"QHZ1", &MfCoefficients::qhz1}, {"QHZ2", &MfCoefficients::qhz2}, {"QHZ3", &MfCoefficients::qhz3},
    {"QHZ4", &MfCoefficients::qhz4}, {"SSZ1", &MfCoefficients::ssz1}, {"SSZ2", &MfCoefficients::ssz2},
    {"SSZ3", &MfCoefficients::ssz3}, {"SSZ4", &MfCoefficients::ssz4},
};

constexpr KeySpec kScalingKeys[] = {
    {"LFZO", &MfCoefficients::lfzo}, {"LCX", &MfCoefficients::lcx},     {"LMUX", &MfCoefficients::lmux},
    {"LEX", &MfCoefficients::lex},   {"LKX", &MfCoefficients::lkx},     {"LHX", &MfCoefficients::lhx},
    {"LVX", &MfCoefficients::lvx},   {"LGAX", &MfCoefficients::lgax},   {"LCY", &MfCoefficients::lcy},
    {"LMUY", &MfCoefficients::lmuy}, {"LEY", &MfCoefficients::ley},     {"LKY", &MfCoefficients::lky},
    {"LHY", &MfCoefficients::lhy},   {"LVY", &MfCoefficients::lvy},     {"LGAY", &MfCoefficients::lgay},
    {"LTR", &MfCoefficients::ltr},   {"LRES", &MfCoefficients::lres},   {"LGAZ", &MfCoefficients::lgaz},
    {"LXAL", &MfCoefficients::lxal}, {"LYKA", &MfCoefficients::lyka},   {"LVYKA", &MfCoefficients::lvyka},
    {"LS", &MfCoefficients::ls},     {"LMX", &MfCoefficients::lmx},     {"LVMX", &MfCoefficients::lvmx},
    {"LMY", &MfCoefficients::lmy},
};

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// D sin(C atan(B x - E (B x - atan(B x))))
double mf_sin(double b, double c, double d, double e, double x) {
  double bx = b * x;
  return d * std::sin(c * std::atan(bx - e * (bx - std::atan(bx))));
}

double mf_cos(double b, double c, double e, double x) {
  double bx = b * x;
  return std::cos(c * std::atan(bx - e * (bx - std::atan(bx))));
}

}  // namespace

void TireBatch::resize(size_t n) {
  for (auto* v : {&fz, &kappa, &alpha, &gamma, &vx, &fx, &fy, &mx, &my, &mz}) v->assign(n, 0.0);
}

MagicFormula::MagicFormula(const TirFile& file) {
  auto get = [&](const char* key, double& dst, double fallback) {
    if (auto v = file.number(key)) {
      dst = *v;
    } else {
      dst = fallback;
      defaulted_.emplace_back(key);
    }
  };
  get("FNOMIN", c_.fnomin, 0.0);
  get("UNLOADED_RADIUS", c_.r0, 0.0);
  get("VERTICAL_STIFFNESS", c_.kz, 0.0);
  get("VERTICAL_DAMPING", c_.cz, 0.0);
  get("LONGVL", c_.longvl, 16.7);
  for (const auto& k : kShapeKeys) get(k.name, c_.*(k.field), 0.0);
  for (const auto& k : kScalingKeys) get(k.name, c_.*(k.field), 1.0);

  if (!(c_.fnomin > 0.0) || !(c_.r0 > 0.0)) throw InputError("tire: FNOMIN and UNLOADED_RADIUS must be positive");
  if (!(c_.kz > 0.0)) throw InputError("tire: VERTICAL_STIFFNESS must be present and positive");
  if (c_.cz < 0.0) throw InputError("tire: VERTICAL_DAMPING must be non-negative");
}

double MagicFormula::peak_fx(double fz, double gamma) const {
  double fz0 = c_.fnomin * c_.lfzo;
  double dfz = (fz - fz0) / fz0;
  double gx = gamma * c_.lgax;
  double mux = (c_.pdx1 + c_.pdx2 * dfz) * (1.0 - c_.pdx3 * gx * gx) * c_.lmux;
  return mux * fz;
}

double MagicFormula::peak_fy(double fz, double gamma) const {
  double fz0 = c_.fnomin * c_.lfzo;
  double dfz = (fz - fz0) / fz0;
  double gy = gamma * c_.lgay;
  double muy = (c_.pdy1 + c_.pdy2 * dfz) * (1.0 - c_.pdy3 * gy * gy) * c_.lmuy;
  return muy * fz;
}

double MagicFormula::cornering_stiffness(double fz, double gamma) const {
  double fz0 = c_.fnomin * c_.lfzo;
  double gy = gamma * c_.lgay;
  return c_.pky1 * fz0 * std::sin(2.0 * std::atan(fz / (c_.pky2 * fz0))) * (1.0 - c_.pky3 * std::abs(gy)) * c_.lky;
}

double MagicFormula::slip_stiffness(double fz) const {
  double fz0 = c_.fnomin * c_.lfzo;
  double dfz = (fz - fz0) / fz0;
  return fz * (c_.pkx1 + c_.pkx2 * dfz) * std::exp(c_.pkx3 * dfz) * c_.lkx;
}

TireForces MagicFormula::evaluate(const TireInput& in) const {
  TireForces out;
  const double fz = in.fz;
  if (!(fz > 0.0)) return out;

  const auto& c = c_;
  const double kappa = in.kappa;
  const double alpha = in.alpha;
  const double gamma = in.gamma;
  const double fz0 = c.fnomin * c.lfzo;
  const double dfz = (fz - fz0) / fz0;

  // Pure longitudinal slip.
  const double gx = gamma * c.lgax;
  const double shx = (c.phx1 + c.phx2 * dfz) * c.lhx;
  const double kx_ = kappa + shx;
  const double cx = c.pcx1 * c.lcx;
  const double mux = (c.pdx1 + c.pdx2 * dfz) * (1.0 - c.pdx3 * gx * gx) * c.lmux;
  const double dx = mux * fz;
  const double ex = std::min(1.0, (c.pex1 + c.pex2 * dfz + c.pex3 * dfz * dfz) * (1.0 - c.pex4 * sgn(kx_)) * c.lex);
  const double kxk = fz * (c.pkx1 + c.pkx2 * dfz) * std::exp(c.pkx3 * dfz) * c.lkx;
  const double bx = kxk / (cx * dx + std::copysign(kEps, cx * dx));
  const double svx = fz * (c.pvx1 + c.pvx2 * dfz) * c.lvx * c.lmux;
  const double fx0 = mf_sin(bx, cx, dx, ex, kx_) + svx;

  // Pure lateral slip.
  const double gy = gamma * c.lgay;
  const double shy = (c.phy1 + c.phy2 * dfz) * c.lhy + c.phy3 * gy;
  const double ay = alpha + shy;
  const double cy = c.pcy1 * c.lcy;
  const double muy = (c.pdy1 + c.pdy2 * dfz) * (1.0 - c.pdy3 * gy * gy) * c.lmuy;
  const double dy = muy * fz;
  const double ey = std::min(1.0, (c.pey1 + c.pey2 * dfz) * (1.0 - (c.pey3 + c.pey4 * gy) * sgn(ay)) * c.ley);
  const double kya = c.pky1 * fz0 * std::sin(2.0 * std::atan(fz / (c.pky2 * fz0))) * (1.0 - c.pky3 * std::abs(gy)) * c.lky;
  const double kya_safe = kya + std::copysign(kEps, kya);
  const double by = kya / (cy * dy + std::copysign(kEps, cy * dy));
  const double svy = fz * ((c.pvy1 + c.pvy2 * dfz) * c.lvy + (c.pvy3 + c.pvy4 * dfz) * gy) * c.lmuy;
  const double fy0 = mf_sin(by, cy, dy, ey, ay) + svy;

  // Combined slip weighting.
  const double shxa = c.rhx1;
  const double as = alpha + shxa;
  const double bxa = c.rbx1 * std::cos(std::atan(c.rbx2 * kappa)) * c.lxal;
  const double cxa = c.rcx1;
  const double exa = std::min(1.0, c.rex1 + c.rex2 * dfz);
  const double gxa = mf_cos(bxa, cxa, exa, as) / mf_cos(bxa, cxa, exa, shxa);
  const double fx = gxa * fx0;

  const double shyk = c.rhy1 + c.rhy2 * dfz;
  const double ks = kappa + shyk;
  const double byk = c.rby1 * std::cos(std::atan(c.rby2 * (alpha - c.rby3))) * c.lyka;
  const double cyk = c.rcy1;
  const double eyk = std::min(1.0, c.rey1 + c.rey2 * dfz);
  const double dvyk = muy * fz * (c.rvy1 + c.rvy2 * dfz + c.rvy3 * gamma) * std::cos(std::atan(c.rvy4 * alpha));
  const double svyk = dvyk * std::sin(c.rvy5 * std::atan(c.rvy6 * kappa)) * c.lvyka;
  const double gyk = mf_cos(byk, cyk, eyk, ks) / mf_cos(byk, cyk, eyk, shyk);
  const double fy = gyk * fy0 + svyk;

  // Aligning moment: pneumatic trail plus residual torque.
  const double gz = gamma * c.lgaz;
  const double sht = c.qhz1 + c.qhz2 * dfz + (c.qhz3 + c.qhz4 * dfz) * gz;
  const double at = alpha + sht;
  const double shf = shy + svy / kya_safe;
  const double ar = alpha + shf;
  const double bt = (c.qbz1 + c.qbz2 * dfz + c.qbz3 * dfz * dfz) * (1.0 + c.qbz4 * gz + c.qbz5 * std::abs(gz)) * c.lky /
                    (c.lmuy != 0.0 ? c.lmuy : 1.0);
  const double ct = c.qcz1;
  const double dt = fz * (c.qdz1 + c.qdz2 * dfz) * (1.0 + c.qdz3 * gz + c.qdz4 * gz * gz) * (c.r0 / fz0) * c.ltr;
  const double et = std::min(1.0, (c.qez1 + c.qez2 * dfz + c.qez3 * dfz * dfz) *
                                      (1.0 + (c.qez4 + c.qez5 * gz) * (2.0 / std::numbers::pi) * std::atan(bt * ct * at)));
  const double br = c.qbz9 * c.lky / (c.lmuy != 0.0 ? c.lmuy : 1.0) + c.qbz10 * by * cy;
  const double dr = fz * ((c.qdz6 + c.qdz7 * dfz) * c.lres + (c.qdz8 + c.qdz9 * dfz) * gz) * c.r0 * c.lmuy;

  const double kratio = kxk / kya_safe;
  const double ateq = std::atan(std::sqrt(std::tan(at) * std::tan(at) + kratio * kratio * kappa * kappa)) * sgn(at);
  const double areq = std::atan(std::sqrt(std::tan(ar) * std::tan(ar) + kratio * kratio * kappa * kappa)) * sgn(ar);
  const double t = dt * mf_cos(bt, ct, et, ateq) * std::cos(alpha);
  const double mzr = dr * std::cos(std::atan(br * areq)) * std::cos(alpha);
  const double s = (c.ssz1 + c.ssz2 * (fy / fz0) + (c.ssz3 + c.ssz4 * dfz) * gamma) * c.r0 * c.ls;
  const double mz = -t * (fy - svyk) + mzr + s * fx;

  const double mx = c.r0 * fz * (c.qsx1 * c.lvmx - c.qsx2 * gamma + c.qsx3 * fy / fz0) * c.lmx;

  const double vr = std::abs(in.vx / c.longvl);
  const double my = c.r0 * fz * (c.qsy1 + c.qsy2 * fx / fz0 + c.qsy3 * vr + c.qsy4 * vr * vr * vr * vr) * c.lmy *
                    std::tanh(in.vx / kVeps);

  out.fx = fx;
  out.fy = fy;
  out.mx = mx;
  out.my = my;
  out.mz = mz;
  return out;
}

void MagicFormula::evaluate(TireBatch& b) const {
  const size_t n = b.fz.size();
  b.fx.resize(n);
  b.fy.resize(n);
  b.mx.resize(n);
  b.my.resize(n);
  b.mz.resize(n);
  for (size_t i = 0; i < n; ++i) {
    TireForces f = evaluate(TireInput{b.fz[i], b.kappa[i], b.alpha[i], b.gamma[i], b.vx[i]});
    b.fx[i] = f.fx;
    b.fy[i] = f.fy;
    b.mx[i] = f.mx;
    b.my[i] = f.my;
    b.mz[i] = f.mz;
  }
}

double tire_vertical_force(double deflection, double deflection_rate, double stiffness, double damping) {
  if (deflection <= 0.0) return 0.0;
  return std::max(0.0, stiffness * deflection + damping * deflection_rate);
}

}  // namespace laptime::tire
