#pragma once

#include <memory>
#include <string>
#include <variant>

#include "gaze3d/gbr.hpp"
#include "gaze3d/linear_models.hpp"
#include "gaze3d/matrix.hpp"
#include "gaze3d/svr.hpp"

namespace gaze3d {

// The five compared regressors, in the fixed tie-break order.
enum class ModelKind { LR = 0, BR = 1, ENet = 2, SVR = 3, GBR = 4 };

const char* model_kind_name(ModelKind k);
ModelKind model_kind_from_name(const std::string& name);
inline constexpr ModelKind kAllModelKinds[] = {ModelKind::LR, ModelKind::BR,
                                               ModelKind::ENet, ModelKind::SVR,
                                               ModelKind::GBR};

struct ModelConfigs {
    LinConfig lr;
    BrConfig br;
    EnetConfig enet;
    SvrConfig svr;
    GbrConfig gbr;
};

// Value-semantic wrapper over the five fitted model types.
class AnyModel {
public:
    using Storage = std::variant<LinModel, BrModel, EnetModel, SvrModel, GbrModel>;

    AnyModel() = default;
    explicit AnyModel(Storage m) : model_(std::move(m)) {}

    ModelKind kind() const;
    double predict(std::span<const double> x) const;

    std::string to_json() const;
    static AnyModel from_json(const std::string& text);

    const Storage& storage() const { return model_; }

private:
    Storage model_;
};

AnyModel fit_model(ModelKind kind, const Matrix& X, std::span<const double> y,
                   const ModelConfigs& cfg = {});

}  // namespace gaze3d
