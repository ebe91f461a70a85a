#include "flatnorm/predicates.hpp"

#include <cmath>
#include <gmpxx.h>

namespace flatnorm {

namespace {

constexpr double kOrientBound = 3.3306690738754716e-16;
constexpr double kIncircleBound = 1.1102230246251577e-15;

int sign_of(const mpq_class& v) { return sgn(v); }

int orient_exact(Point2 a, Point2 b, Point2 c) {
    mpq_class acx = mpq_class(a.x) - c.x, bcx = mpq_class(b.x) - c.x;
    mpq_class acy = mpq_class(a.y) - c.y, bcy = mpq_class(b.y) - c.y;
    return sign_of(acx * bcy - acy * bcx);
}

int incircle_exact(Point2 a, Point2 b, Point2 c, Point2 d) {
    mpq_class adx = mpq_class(a.x) - d.x, ady = mpq_class(a.y) - d.y;
    mpq_class bdx = mpq_class(b.x) - d.x, bdy = mpq_class(b.y) - d.y;
    mpq_class cdx = mpq_class(c.x) - d.x, cdy = mpq_class(c.y) - d.y;
    mpq_class alift = adx * adx + ady * ady;
    mpq_class blift = bdx * bdx + bdy * bdy;
    mpq_class clift = cdx * cdx + cdy * cdy;
    mpq_class det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                    clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace

int orient2d(Point2 a, Point2 b, Point2 c) {
    double detleft = (a.x - c.x) * (b.y - c.y);
    double detright = (a.y - c.y) * (b.x - c.x);
    double det = detleft - detright;
    double bound = kOrientBound * (std::fabs(detleft) + std::fabs(detright));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return orient_exact(a, b, c);
}

int incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
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
    double bound = kIncircleBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    return incircle_exact(a, b, c, d);
}

bool on_closed_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace flatnorm
