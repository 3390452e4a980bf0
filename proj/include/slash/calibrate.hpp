#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "slash/probe.hpp"
#include "slash/sharpen.hpp"
#include "slash/tensor_io.hpp"

namespace slash {

enum class ObjectiveKind { ADJACENCY_F1, CUSTOM };

struct CalibrationItem {
    AttentionTensor tensor;
    TokenizedSerialization ser;
    std::string name;
};

struct CalibrationSpec {
    std::vector<double> gamma_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    ObjectiveKind objective = ObjectiveKind::ADJACENCY_F1;
    std::string custom_command; // invoked with a tensor path; prints one real
    std::vector<CalibrationItem> items;
    Granularity granularity = Granularity::LAYER;
};

struct GammaScore {
    double gamma = 0.0;
    double mean_score = 0.0;
    std::vector<double> per_item;
};

struct CalibrationResult {
    std::vector<GammaScore> per_gamma;
    double best_gamma = 1.0;
};

using ItemScorer = std::function<double(const AttentionTensor& sharpened, const CalibrationItem& item)>;

/// Run an external scorer: child process, tensor path as the argument, one
/// floating-point line on stdout, nonzero exit means failure.
inline double run_custom_objective(const std::string& command, const AttentionTensor& t) {
    static std::atomic<unsigned> counter{0};
    const auto path = std::filesystem::temp_directory_path() /
                      ("slash-calib-" + std::to_string(::getpid()) + "-" +
                       std::to_string(counter.fetch_add(1)) + ".slsh");
    write_tensor_file(path, t);
    const std::string full = command + " \"" + path.string() + "\"";
    FILE* pipe = ::popen(full.c_str(), "r");
    if (!pipe) {
        std::filesystem::remove(path);
        throw Error("cannot launch objective command: " + command);
    }
    char buf[256] = {};
    std::string out;
    while (std::fgets(buf, sizeof(buf), pipe)) out += buf;
    const int status = ::pclose(pipe);
    std::filesystem::remove(path);
    if (status != 0) throw Error("objective command exited nonzero: " + command);
    try {
        return std::stod(out);
    } catch (const std::exception&) {
        throw Error("objective command printed no number: '" + out + "'");
    }
}

inline void validate_calibration_spec(const CalibrationSpec& spec) {
    if (spec.gamma_grid.empty()) throw BoundsError("gamma grid must be non-empty");
    for (std::size_t i = 0; i < spec.gamma_grid.size(); ++i) {
        const double g = spec.gamma_grid[i];
        if (g < 0.0 || g > 1.0) throw BoundsError("gamma grid values must lie in [0, 1]");
        if (i > 0 && g <= spec.gamma_grid[i - 1]) throw BoundsError("gamma grid must be strictly increasing");
    }
    if (spec.items.empty()) throw BoundsError("calibration needs at least one item");
}

/// Grid sweep with a caller-supplied scorer. The best gamma attains the
/// maximum mean score; ties resolve toward the larger gamma (least
/// intervention).
inline CalibrationResult calibrate_scored(const CalibrationSpec& spec, const SelectionResult& sel,
                                          const ItemScorer& scorer) {
    validate_calibration_spec(spec);
    if (sel.selected_heads.empty()) throw DegenerateError("calibration needs a non-empty head selection");
    CalibrationResult res;
    for (double gamma : spec.gamma_grid) {
        SharpenConfig cfg;
        cfg.gamma = gamma;
        cfg.granularity = spec.granularity;
        cfg.layer_targets = sel.selected_layers;
        cfg.head_targets = sel.selected_heads;
        GammaScore gs;
        gs.gamma = gamma;
        for (std::size_t it = 0; it < spec.items.size(); ++it) {
            double score = 0.0;
            try {
                const AttentionTensor sharpened = sharpen_tensor(spec.items[it].tensor, cfg);
                score = scorer(sharpened, spec.items[it]);
            } catch (const Error& e) {
                throw Error("objective failed on item " + std::to_string(it) + ": " + e.what());
            }
            gs.per_item.push_back(score);
            gs.mean_score += score;
        }
        gs.mean_score /= static_cast<double>(gs.per_item.size());
        res.per_gamma.push_back(std::move(gs));
    }
    res.best_gamma = res.per_gamma.front().gamma;
    double best = res.per_gamma.front().mean_score;
    for (const GammaScore& gs : res.per_gamma) {
        if (gs.mean_score >= best) { // grid is increasing, so >= prefers the larger gamma
            best = gs.mean_score;
            res.best_gamma = gs.gamma;
        }
    }
    return res;
}

inline CalibrationResult calibrate(const CalibrationSpec& spec, const SelectionResult& sel) {
    ItemScorer scorer;
    if (spec.objective == ObjectiveKind::ADJACENCY_F1) {
        scorer = [&sel](const AttentionTensor& sharpened, const CalibrationItem& item) {
            return downstream_probe(sharpened, item.ser, sel).f1;
        };
    } else {
        if (spec.custom_command.empty()) throw BoundsError("custom objective needs a command");
        scorer = [&spec](const AttentionTensor& sharpened, const CalibrationItem&) {
            return run_custom_objective(spec.custom_command, sharpened);
        };
    }
    return calibrate_scored(spec, sel, scorer);
}

inline nlohmann::json calibration_to_json(const CalibrationResult& res) {
    nlohmann::json per_gamma = nlohmann::json::array();
    for (const GammaScore& gs : res.per_gamma) {
        per_gamma.push_back({{"gamma", gs.gamma}, {"mean_score", gs.mean_score}, {"per_item", gs.per_item}});
    }
    return {{"per_gamma", std::move(per_gamma)}, {"best_gamma", res.best_gamma}};
}

} // namespace slash
