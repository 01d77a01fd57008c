#pragma once

#include <stdexcept>
#include <string>

namespace gaze3d {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define GAZE3D_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                          \
        explicit Name(const std::string& msg) : Error(msg) {}      \
    }

// geometry
GAZE3D_DEFINE_ERROR(RayParallelToPlane);
GAZE3D_DEFINE_ERROR(RaysParallel);
GAZE3D_DEFINE_ERROR(NonPositiveDepth);

// synth
GAZE3D_DEFINE_ERROR(TargetBehindEyes);

// eye features
GAZE3D_DEFINE_ERROR(DegenerateLandmarks);

// regressors
GAZE3D_DEFINE_ERROR(NonFiniteInput);
GAZE3D_DEFINE_ERROR(DimensionMismatch);
GAZE3D_DEFINE_ERROR(SingularDesign);
GAZE3D_DEFINE_ERROR(TooFewSamples);

// calibration / psom
GAZE3D_DEFINE_ERROR(RankDeficient);
GAZE3D_DEFINE_ERROR(NotALattice);

// depth
GAZE3D_DEFINE_ERROR(MissingPupil);
GAZE3D_DEFINE_ERROR(TooFewRows);

// pipeline
GAZE3D_DEFINE_ERROR(InsufficientDepthVariation);
GAZE3D_DEFINE_ERROR(SubjectOverlap);

// cli
GAZE3D_DEFINE_ERROR(ConfigInvalid);
GAZE3D_DEFINE_ERROR(MissingInput);
GAZE3D_DEFINE_ERROR(DownstreamError);

#undef GAZE3D_DEFINE_ERROR

}  // namespace gaze3d
