#include "core/model_io.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

#include "core/error.hpp"

namespace bnpmle {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "boostnpmle-model";
constexpr int kFormatVersion = 1;
constexpr double kNormalizerTol = 1e-9;

const char* kind_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::smooth_spline: return "spline";
    case LearnerKind::gaussian_kernel: return "kernel";
    case LearnerKind::cart: return "cart";
  }
  return "?";
}

LearnerKind kind_from_name(const std::string& name) {
  if (name == "spline") return LearnerKind::smooth_spline;
  if (name == "kernel") return LearnerKind::gaussian_kernel;
  if (name == "cart") return LearnerKind::cart;
  throw Error(ErrorCode::invalid_input,
              "model file: unknown learner kind '" + name + "'");
}

ordered_json learner_to_json(const FittedLearner& learner) {
  ordered_json j;
  if (const auto* s = std::get_if<SplineLearner>(&learner)) {
    j["values"] = s->values;
    j["d2"] = s->d2;
  } else if (const auto* k = std::get_if<KernelLearner>(&learner)) {
    j["intercept"] = k->intercept;
    j["coef"] = k->coef;
  } else {
    const auto& c = std::get<CartLearner>(learner);
    std::vector<double> threshold, value;
    std::vector<int> left, right;
    for (const CartNode& node : c.nodes) {
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      value.push_back(node.value);
    }
    j["threshold"] = threshold;
    j["left"] = left;
    j["right"] = right;
    j["value"] = value;
  }
  return j;
}

template <typename T>
std::vector<T> array_field(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(ErrorCode::invalid_input,
                std::string("model file: missing array '") + key + "'");
  }
  return j[key].get<std::vector<T>>();
}

FittedLearner learner_from_json(const ordered_json& j, const Ensemble& ens) {
  switch (ens.spec.kind) {
    case LearnerKind::smooth_spline: {
      SplineLearner s;
      s.x = ens.knots;
      s.values = array_field<double>(j, "values");
      s.d2 = array_field<double>(j, "d2");
      if (s.values.size() != ens.knots->size() ||
          s.d2.size() != ens.knots->size()) {
        throw Error(ErrorCode::invalid_input,
                    "model file: spline learner length mismatch");
      }
      return s;
    }
    case LearnerKind::gaussian_kernel: {
      KernelLearner k;
      k.centers = ens.knots;
      k.bandwidth = ens.spec.bandwidth;
      if (!j.contains("intercept") || !j["intercept"].is_number()) {
        throw Error(ErrorCode::invalid_input,
                    "model file: kernel learner lacks an intercept");
      }
      k.intercept = j["intercept"].get<double>();
      k.coef = array_field<double>(j, "coef");
      if (k.coef.size() != ens.knots->size()) {
        throw Error(ErrorCode::invalid_input,
                    "model file: kernel learner length mismatch");
      }
      return k;
    }
    case LearnerKind::cart: {
      CartLearner c;
      const auto threshold = array_field<double>(j, "threshold");
      const auto left = array_field<int>(j, "left");
      const auto right = array_field<int>(j, "right");
      const auto value = array_field<double>(j, "value");
      const std::size_t m = threshold.size();
      if (left.size() != m || right.size() != m || value.size() != m ||
          m == 0) {
        throw Error(ErrorCode::invalid_input,
                    "model file: tree learner array mismatch");
      }
      const int im = static_cast<int>(m);
      for (std::size_t i = 0; i < m; ++i) {
        const bool leaf = left[i] < 0;
        if (leaf != (right[i] < 0) || left[i] >= im || right[i] >= im) {
          throw Error(ErrorCode::invalid_input,
                      "model file: tree learner has inconsistent children");
        }
        c.nodes.push_back({threshold[i], left[i], right[i], value[i]});
      }
      return c;
    }
  }
  throw Error(ErrorCode::invalid_input, "model file: unreachable learner kind");
}

} // namespace

void save_model(const Ensemble& ens, const std::string& path) {
  ordered_json j;
  j["format"] = kFormatTag;
  j["version"] = kFormatVersion;
  j["dataset"] = {
      {"knots", ens.data.knots},
      {"freq", ens.data.freq},
      {"total_count", ens.data.total_count},
  };
  ordered_json cfg;
  cfg["learner"] = kind_name(ens.spec.kind);
  switch (ens.spec.kind) {
    case LearnerKind::smooth_spline:
      cfg["df"] = ens.spec.df;
      break;
    case LearnerKind::gaussian_kernel:
      cfg["ridge_lambda"] = ens.spec.ridge_lambda;
      cfg["bandwidth"] = ens.spec.bandwidth;
      break;
    case LearnerKind::cart:
      cfg["minsplit"] = ens.spec.minsplit;
      break;
  }
  cfg["iterations"] = ens.learners.size();
  j["config"] = std::move(cfg);
  j["normalizer"] = ens.normalizer;
  ordered_json learners = ordered_json::array();
  for (const FittedLearner& learner : ens.learners) {
    learners.push_back(learner_to_json(learner));
  }
  j["learners"] = std::move(learners);

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw Error(ErrorCode::io, "failed writing '" + path + "'");
  }
}

Ensemble load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open '" + path + "'");
  }
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input,
                path + ": not a valid model file (" + e.what() + ")");
  }
  if (!j.is_object() || j.value("format", "") != kFormatTag) {
    throw Error(ErrorCode::invalid_input,
                path + ": not a model file (missing format tag)");
  }
  if (j.value("version", 0) != kFormatVersion) {
    throw Error(ErrorCode::invalid_input,
                path + ": unsupported model format version");
  }

  Ensemble ens;
  try {
    const ordered_json& ds = j.at("dataset");
    ens.data.knots = array_field<double>(ds, "knots");
    ens.data.freq = array_field<double>(ds, "freq");
    ens.data.total_count = ds.at("total_count").get<std::size_t>();

    const ordered_json& cfg = j.at("config");
    ens.spec.kind = kind_from_name(cfg.at("learner").get<std::string>());
    switch (ens.spec.kind) {
      case LearnerKind::smooth_spline:
        ens.spec.df = cfg.at("df").get<double>();
        break;
      case LearnerKind::gaussian_kernel:
        ens.spec.ridge_lambda = cfg.at("ridge_lambda").get<double>();
        ens.spec.bandwidth = cfg.at("bandwidth").get<double>();
        break;
      case LearnerKind::cart:
        ens.spec.minsplit = cfg.at("minsplit").get<int>();
        break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input,
                path + ": malformed model file (" + std::string(e.what()) + ")");
  }

  const std::size_t n = ens.data.knots.size();
  if (n < 2 || ens.data.freq.size() != n || ens.data.total_count == 0) {
    throw Error(ErrorCode::invalid_input,
                path + ": malformed dataset block");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(ens.data.knots[i] < ens.data.knots[i + 1])) {
      throw Error(ErrorCode::invalid_input,
                  path + ": knots are not strictly increasing");
    }
  }
  if (ens.spec.kind == LearnerKind::gaussian_kernel &&
      !(ens.spec.bandwidth > 0.0)) {
    throw Error(ErrorCode::invalid_input,
                path + ": kernel model without a positive bandwidth");
  }

  ens.quad = trapezoid_weights(ens.data);
  ens.knots = std::make_shared<const std::vector<double>>(ens.data.knots);
  if (!j.contains("learners") || !j["learners"].is_array() ||
      j["learners"].empty()) {
    throw Error(ErrorCode::invalid_input, path + ": no learners");
  }
  for (const ordered_json& lj : j["learners"]) {
    ens.learners.push_back(learner_from_json(lj, ens));
  }

  refresh_ensemble_caches(ens);
  const double stored = j.value("normalizer", 0.0);
  if (!(std::fabs(ens.normalizer - stored) <=
        kNormalizerTol * std::max(1.0, std::fabs(stored)))) {
    throw Error(ErrorCode::invalid_input,
                path + ": stored normalizer does not match the learners");
  }
  return ens;
}

} // namespace bnpmle
