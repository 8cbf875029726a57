#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scma/channel.hpp"
#include "scma/complexity.hpp"
#include "scma/detection.hpp"
#include "scma/layout.hpp"

namespace scma {

enum class DetectorKind { ml, msd, mpa, list_msd };
enum class LlrInput { soft, hard };

DetectorKind parse_detector(const std::string& s);
const char* to_string(DetectorKind d) noexcept;

/// One Monte Carlo sweep. Config files use `key = value` lines with the keys
/// codebook, channel, snr, detector, ni, ncand, coded, nc, trials, seed, out,
/// threads, llr_input, llr_clamp and record_wall_time.
struct RunConfig {
    std::string codebook = "builtin:qam4";
    ChannelModel channel = ChannelModel::rayleigh_flat;
    std::vector<double> snr_db;
    DetectorKind detector = DetectorKind::msd;
    std::size_t mpa_iterations = 12;
    std::size_t list_size = 600;
    bool coded = false;
    std::size_t codeword_length = 132;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string output;
    std::size_t threads = 1;
    LlrInput llr_input = LlrInput::soft;
    double llr_clamp = kDefaultLlrClamp;
    bool record_wall_time = false;

    /// Throws Error on an empty SNR grid, zero budgets or unsupported code lengths.
    void validate() const;
};

/// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_snr_grid(const std::string& s);
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

/// One SNR point. Uncoded trials send one symbol per user and count one frame
/// per trial; coded trials send one codeword per user and count K frames.
/// Counter averages are per detector invocation.
struct ResultRecord {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    std::uint64_t frame_errors = 0;
    double fer = 0.0;
    double avg_real_adds = 0.0;
    double avg_real_mults = 0.0;
    double avg_exp_log = 0.0;
    double avg_N_v1 = 0.0;
    double avg_N_v2 = 0.0;
    double wall_time = 0.0;

    bool operator==(const ResultRecord&) const = default;
};

/// Raw tallies of one or more trials.
struct TrialTally {
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t frames = 0;
    std::uint64_t frame_errors = 0;
    std::uint64_t detections = 0;
    OpCounters counters;

    TrialTally& operator+=(const TrialTally& o) noexcept;
};

/// A loaded, relabeled system ready for simulation.
class Simulation {
public:
    explicit Simulation(RunConfig cfg);

    const RunConfig& config() const noexcept { return cfg_; }
    const ScmaSystem& system() const noexcept { return sys_; }

    /// Uncoded trial `index` at the given SNR. Trial randomness depends only
    /// on (seed, index), so all SNR points share channel and noise shapes.
    TrialTally uncoded_trial(double snr_db, std::uint64_t index) const;

    /// Coded trial decoded twice from the same detector output: with soft
    /// LLRs and with hard decisions mapped to +-clamp.
    struct CodedTally {
        TrialTally soft;
        TrialTally hard;
    };
    CodedTally coded_trial(double snr_db, std::uint64_t index) const;

    /// All trials of one SNR point, reduced in trial order.
    TrialTally run_point(double snr_db) const;
    std::vector<ResultRecord> run() const;

private:
    struct SlotOutput {
        std::vector<std::uint8_t> hard_bits;
        std::vector<double> llrs; // empty for hard-output detectors
        OpCounters counters;
    };
    SlotOutput detect(const CVector& y, const CMatrix& g, double noise_variance) const;

    RunConfig cfg_;
    ScmaSystem sys_;
    std::optional<DetectionLayout> layout_;
};

ResultRecord make_record(double snr_db, std::uint64_t trials, const TrialTally& t, double wall_time);

std::vector<ResultRecord> run_sweep(const RunConfig& cfg);

inline constexpr const char* kResultHeader =
    "snr_db,trials,bit_errors,ber,frame_errors,fer,avg_real_adds,avg_real_mults,avg_exp_log,avg_N_v1,avg_N_v2,"
    "wall_time";

void write_results(std::ostream& out, const std::vector<ResultRecord>& records);
void write_results(const std::string& path, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> read_results(std::istream& in);

} // namespace scma
