#include "graphdarcy/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cfloat>

namespace graphdarcy {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = DBL_EPSILON * 0.5;
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;
constexpr double kDotBound = 8.0 * kEps;

int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

int orient_exact(Vec2 a, Vec2 b, Vec2 c) {
  Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return sign_of(det);
}

int incircle_exact(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  Rational dx(d.x), dy(d.y);
  Rational adx = Rational(a.x) - dx, ady = Rational(a.y) - dy;
  Rational bdx = Rational(b.x) - dx, bdy = Rational(b.y) - dy;
  Rational cdx = Rational(c.x) - dx, cdy = Rational(c.y) - dy;
  Rational alift = adx * adx + ady * ady;
  Rational blift = bdx * bdx + bdy * bdy;
  Rational clift = cdx * cdx + cdy * cdy;
  Rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                 clift * (adx * bdy - bdx * ady);
  return sign_of(det);
}

}  // namespace

int orient2d(Vec2 a, Vec2 b, Vec2 c) {
  double detleft = (b.x - a.x) * (c.y - a.y);
  double detright = (b.y - a.y) * (c.x - a.x);
  double det = detleft - detright;
  double bound = kCcwBound * (std::fabs(detleft) + std::fabs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  if (detleft == 0.0 && detright == 0.0) return 0;
  return orient_exact(a, b, c);
}

int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;
  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double alift = adx * adx + ady * ady;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double blift = bdx * bdx + bdy * bdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double clift = cdx * cdx + cdy * cdy;
  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                     (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                     (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  double bound = kIccBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return incircle_exact(a, b, c, d);
}

int dot_sign(Vec2 p, Vec2 a, Vec2 b) {
  double t1 = (a.x - p.x) * (b.x - p.x);
  double t2 = (a.y - p.y) * (b.y - p.y);
  double s = t1 + t2;
  double bound = kDotBound * (std::fabs(t1) + std::fabs(t2));
  if (s > bound) return 1;
  if (-s > bound) return -1;
  Rational px(p.x), py(p.y);
  Rational r = (Rational(a.x) - px) * (Rational(b.x) - px) + (Rational(a.y) - py) * (Rational(b.y) - py);
  return sign_of(r);
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  if (orient2d(a, b, p) != 0) return false;
  return std::fmin(a.x, b.x) <= p.x && p.x <= std::fmax(a.x, b.x) && std::fmin(a.y, b.y) <= p.y &&
         p.y <= std::fmax(a.y, b.y);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
  int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

}  // namespace graphdarcy
