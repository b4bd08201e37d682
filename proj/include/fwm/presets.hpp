#pragma once

#include <string>
#include <vector>

#include "fwm/config.hpp"

namespace fwm {

const std::vector<std::string>& preset_names();

// Default configuration with the figure's overrides applied. Throws UnknownPreset.
ExperimentConfig preset_config(const std::string& name);

struct EmittedFile {
    std::string name;
    std::string digest;  // FNV-1a 64 of the file bytes
};

struct RunManifest {
    std::string preset;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::vector<EmittedFile> files;
};

// Writes the figure's outputs, the resolved config and manifest.txt into out_dir.
// A non-null `config` replaces the preset's own configuration.
RunManifest run_preset(const std::string& name, const std::string& out_dir, const ExperimentConfig* config = nullptr);

std::string version_string();

}  // namespace fwm
