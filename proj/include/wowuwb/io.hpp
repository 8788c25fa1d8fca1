// SPDX-License-Identifier: Apache-2.0
//
// wow-uwb -- stochastic UWB channel simulator for hurricane conditions
// Copyright (C) 2026 the wow-uwb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef WOWUWB_IO_HPP
#define WOWUWB_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wowuwb/fitting.hpp"
#include "wowuwb/params.hpp"
#include "wowuwb/synthesis.hpp"

// File formats (field-level reference in docs/schemas.md). Every produced
// file embeds its schema version and the producing command's config hash.

namespace wowuwb::io {

inline constexpr const char *kParamsSchema = "wow-uwb-params/1";
inline constexpr const char *kScansSchema = "wow-uwb-scans/1";
inline constexpr const char *kManifestSchema = "wow-uwb-manifest/1";
inline constexpr const char *kRoundtripSchema = "wow-uwb-roundtrip/1";
inline constexpr const char *kFitSchema = "wow-uwb-fit/1";
inline constexpr const char *kPdpSchema = "wow-uwb-pdp/1";
inline constexpr const char *kAttenuationSchema = "wow-uwb-attenuation/1";
inline constexpr const char *kMpcSchema = "wow-uwb-mpc/1";
inline constexpr const char *kKFactorSchema = "wow-uwb-kfactor/1";

// FNV-1a over the canonical (sorted-key) JSON dump; stable config fingerprint.
std::string config_hash(const nlohmann::json &config);

// Shortest round-trip decimal form; bit-exact re-parse.
std::string format_double(double v);

// --- parameter sets -------------------------------------------------------

nlohmann::json to_json(const MultipathParams &p);
nlohmann::json to_json(const LargeScaleParams &p);
nlohmann::json to_json(const SmallScaleParams &p);
nlohmann::json to_json(const ParameterSet &p);
MultipathParams multipath_from_json(const nlohmann::json &j);
LargeScaleParams large_scale_from_json(const nlohmann::json &j);
SmallScaleParams small_scale_from_json(const nlohmann::json &j);
ParameterSet parameter_set_from_json(const nlohmann::json &j);

nlohmann::json params_file_to_json(const std::map<ScenarioKey, ParameterSet> &tables);
std::map<ScenarioKey, ParameterSet> params_file_from_json(const nlohmann::json &j);
void save_params_file(const std::string &path,
                      const std::map<ScenarioKey, ParameterSet> &tables);
std::map<ScenarioKey, ParameterSet> load_params_file(const std::string &path);

// --- scan ensembles (JSON lines) ------------------------------------------

struct ScanFileHeader {
    std::string schema;
    std::string config_hash;
    Scenario scenario; // wind carried per scan
    std::uint64_t master_seed = 0;
    nlohmann::json config; // full producing config echo
};

nlohmann::json cir_to_json(const Cir &cir);
Cir cir_from_json(const nlohmann::json &j, const ScanFileHeader &header);

void write_scan_file(const std::string &path, const ScanFileHeader &header,
                     const std::vector<Cir> &scans);

struct ScanFile {
    ScanFileHeader header;
    std::vector<Cir> scans;
};
// Throws with the offending line number on corrupt input, and a version error
// on schema mismatch.
ScanFile read_scan_file(const std::string &path);

// --- CSV ------------------------------------------------------------------

// Rows of pre-formatted cells; writes "# schema=<schema> config_hash=<hash>",
// a header line, then the rows. LF endings, '.' decimal point.
void write_csv(const std::string &path, const std::string &schema,
               const std::string &hash, const std::string &header_line,
               const std::vector<std::vector<std::string>> &rows);

nlohmann::json fit_result_to_json(const FitResult &fit);
nlohmann::json roundtrip_to_json(const RoundtripReport &report,
                                 const std::string &config_hash);
void write_roundtrip_csv(const std::string &path, const std::string &hash,
                         const RoundtripReport &report);

void write_manifest(const std::string &path, const std::string &command,
                    const nlohmann::json &config, const std::vector<std::string> &outputs);

} // namespace wowuwb::io

#endif
