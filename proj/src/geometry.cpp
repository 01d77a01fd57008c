#include "gaze3d/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "gaze3d/errors.hpp"

namespace gaze3d {

PlanePoint ray_plane_intersect(const GazeRay& ray, const GazePlane& plane) {
    if (std::abs(ray.direction.z) < 1e-12) {
        throw RayParallelToPlane("gaze ray is parallel to the gaze plane");
    }
    const double t = (plane.distance - ray.origin.z) / ray.direction.z;
    const Vec3 hit = ray.origin + t * ray.direction;
    PlanePoint p;
    p.cm = {hit.x, hit.y};
    p.px = {plane.res_u / 2.0 + hit.x * plane.pixels_per_cm,
            plane.res_v / 2.0 - hit.y * plane.pixels_per_cm};
    return p;
}

double vergence_angle(const GazeRay& left, const GazeRay& right) {
    const double d = std::clamp(left.direction.dot(right.direction), -1.0, 1.0);
    return deg_from_rad(std::acos(d));
}

Vec3 ray_intersection_depth(const GazeRay& left, const GazeRay& right) {
    const Vec3& d1 = left.direction;
    const Vec3& d2 = right.direction;
    if (d1.cross(d2).norm() < 1e-12) {
        throw RaysParallel("visual rays are parallel");
    }
    // closest points on the two lines, then their midpoint
    const Vec3 w0 = left.origin - right.origin;
    const double a = d1.dot(d1);
    const double b = d1.dot(d2);
    const double c = d2.dot(d2);
    const double d = d1.dot(w0);
    const double e = d2.dot(w0);
    const double denom = a * c - b * b;
    const double s = (b * e - c * d) / denom;
    const double t = (a * e - b * d) / denom;
    const Vec3 p1 = left.origin + s * d1;
    const Vec3 p2 = right.origin + t * d2;
    return 0.5 * (p1 + p2);
}

double disparity_from_depth(const Vec3& target, const BinocularConfig& cfg) {
    if (!(target.z > 0.0)) {
        throw NonPositiveDepth("target depth must be positive");
    }
    return cfg.interpupillary_distance *
           (target.z - cfg.zero_parallax_depth) / target.z;
}

}  // namespace gaze3d
