#pragma once

#include "gaze3d/vec.hpp"

namespace gaze3d {

// Ray from a pupil center; direction is kept unit length.
struct GazeRay {
    Vec3 origin;
    Vec3 direction;

    static GazeRay through(const Vec3& origin, const Vec3& target) {
        return {origin, (target - origin).normalized()};
    }
};

// The virtual display plane z = distance. Plane coordinates are centimeters
// centered on the optical axis; pixel coordinates put (0,0) at the top-left
// corner with y growing downward.
struct GazePlane {
    double distance = 85.0;
    double width = 100.0;
    double height = 56.25;
    int res_u = 1920;
    int res_v = 1080;
    double pixels_per_cm = 19.2;
};

struct PlanePoint {
    Vec2 cm;
    Vec2 px;
};

// Eyeball rotation centers sit symmetrically about the origin on the x axis.
struct BinocularConfig {
    double interpupillary_distance = 6.0;
    double zero_parallax_depth = 85.0;

    Vec3 eye_left() const { return {-interpupillary_distance / 2.0, 0.0, 0.0}; }
    Vec3 eye_right() const { return {interpupillary_distance / 2.0, 0.0, 0.0}; }
};

PlanePoint ray_plane_intersect(const GazeRay& ray, const GazePlane& plane);

// Angle between the two gaze directions, degrees in [0, 180].
double vergence_angle(const GazeRay& left, const GazeRay& right);

// Midpoint of the shortest segment between the two visual rays; equals the
// exact intersection when the rays are coplanar and crossing.
Vec3 ray_intersection_depth(const GazeRay& left, const GazeRay& right);

// Screen parallax of a point at depth target.z: P = IPD * (Z - Z0) / Z.
// Positive behind the zero-parallax plane, negative in front of it.
double disparity_from_depth(const Vec3& target, const BinocularConfig& cfg);

}  // namespace gaze3d
