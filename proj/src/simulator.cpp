#include "scma/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "scma/fec.hpp"
#include "scma/ml_oracle.hpp"
#include "scma/mpa.hpp"
#include "scma/msd.hpp"

namespace scma {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& key)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size())
        throw Error("invalid number '" + s + "' for " + key);
    return v;
}

std::uint64_t parse_unsigned(const std::string& s, const std::string& key)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw Error("invalid non-negative integer '" + s + "' for " + key);
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw Error("integer out of range for " + key);
    }
}

bool parse_bool(const std::string& s, const std::string& key)
{
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw Error("invalid boolean '" + s + "' for " + key);
}

// Stacked layer vector x = [x_1; ...; x_K].
CVector transmit(const ScmaSystem& sys, const std::vector<std::size_t>& codewords)
{
    const std::size_t d = sys.config.dims;
    CVector x(sys.config.layers);
    for (std::size_t k = 0; k < codewords.size(); ++k)
        for (std::size_t l = 0; l < d; ++l)
            x[k * d + l] = sys.codebook.point(k, codewords[k])[l];
    return x;
}

} // namespace

DetectorKind parse_detector(const std::string& s)
{
    if (s == "ml")
        return DetectorKind::ml;
    if (s == "msd")
        return DetectorKind::msd;
    if (s == "mpa")
        return DetectorKind::mpa;
    if (s == "list-msd")
        return DetectorKind::list_msd;
    throw Error("unknown detector '" + s + "' (expected ml, msd, mpa or list-msd)");
}

const char* to_string(DetectorKind d) noexcept
{
    switch (d) {
    case DetectorKind::ml:
        return "ml";
    case DetectorKind::msd:
        return "msd";
    case DetectorKind::mpa:
        return "mpa";
    case DetectorKind::list_msd:
        return "list-msd";
    }
    return "msd";
}

std::vector<double> parse_snr_grid(const std::string& s)
{
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string p;
        while (std::getline(ss, p, ':'))
            parts.push_back(trim(p));
        if (parts.size() != 3)
            throw Error("SNR grid must be a:b:step");
        const double a = parse_double(parts[0], "snr");
        const double b = parse_double(parts[1], "snr");
        const double step = parse_double(parts[2], "snr");
        if (!(step > 0.0) || b < a)
            throw Error("SNR grid needs a <= b and step > 0");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(a + static_cast<double>(i) * step);
    } else {
        std::stringstream ss(s);
        std::string p;
        while (std::getline(ss, p, ','))
            out.push_back(parse_double(trim(p), "snr"));
    }
    if (out.empty())
        throw Error("SNR grid is empty");
    return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "codebook")
        cfg.codebook = value;
    else if (key == "channel")
        cfg.channel = parse_channel_model(value);
    else if (key == "snr")
        cfg.snr_db = parse_snr_grid(value);
    else if (key == "detector")
        cfg.detector = parse_detector(value);
    else if (key == "ni")
        cfg.mpa_iterations = parse_unsigned(value, key);
    else if (key == "ncand")
        cfg.list_size = parse_unsigned(value, key);
    else if (key == "coded")
        cfg.coded = parse_bool(value, key);
    else if (key == "nc")
        cfg.codeword_length = parse_unsigned(value, key);
    else if (key == "trials")
        cfg.trials = parse_unsigned(value, key);
    else if (key == "seed")
        cfg.seed = parse_unsigned(value, key);
    else if (key == "out")
        cfg.output = value;
    else if (key == "threads")
        cfg.threads = parse_unsigned(value, key);
    else if (key == "llr_input") {
        if (value == "soft")
            cfg.llr_input = LlrInput::soft;
        else if (value == "hard")
            cfg.llr_input = LlrInput::hard;
        else
            throw Error("llr_input must be soft or hard");
    } else if (key == "llr_clamp")
        cfg.llr_clamp = parse_double(value, key);
    else if (key == "record_wall_time")
        cfg.record_wall_time = parse_bool(value, key);
    else
        throw Error("unknown configuration key '" + key + "'");
}

RunConfig parse_run_config(std::istream& in)
{
    RunConfig cfg;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto pos = line.find('#'); pos != std::string::npos)
            line.erase(pos);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(number) + ": expected key = value");
        try {
            apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const Error& e) {
            throw Error("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config file '" + path + "'");
    return parse_run_config(in);
}

void RunConfig::validate() const
{
    if (snr_db.empty())
        throw Error("SNR grid is empty");
    if (trials == 0)
        throw Error("trial budget must be positive");
    if (mpa_iterations == 0)
        throw Error("ni must be positive");
    if (list_size == 0)
        throw Error("ncand must be positive");
    if (threads == 0)
        throw Error("threads must be positive");
    if (!(llr_clamp > 0.0))
        throw Error("llr_clamp must be positive");
    if (coded)
        (void)ConvolutionalCode::info_length(codeword_length);
}

TrialTally& TrialTally::operator+=(const TrialTally& o) noexcept
{
    bits += o.bits;
    bit_errors += o.bit_errors;
    frames += o.frames;
    frame_errors += o.frame_errors;
    detections += o.detections;
    counters += o.counters;
    return *this;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(RunConfig cfg) : cfg_(std::move(cfg))
{
    cfg_.validate();
    sys_ = resolve_codebook(cfg_.codebook);
    if (!sys_.mapping.has_identity_prefix())
        sys_ = apply_relabeling(sys_, relabel_upper_triangular(sys_.mapping).relabeling);
    if (cfg_.detector == DetectorKind::msd || cfg_.detector == DetectorKind::list_msd)
        layout_ = DetectionLayout::for_system(sys_);
    if (cfg_.coded && cfg_.codeword_length % sys_.config.bits_per_symbol() != 0)
        throw Error("codeword length must be a multiple of log2(M)");
    if (cfg_.detector == DetectorKind::ml && sys_.config.points > 4 && cfg_.coded)
        throw Error("coded ML detection is limited to 4-point codebooks");
}

Simulation::SlotOutput Simulation::detect(const CVector& y, const CMatrix& g, double noise_variance) const
{
    const std::size_t bits = sys_.config.bits_per_symbol();
    SlotOutput out;
    switch (cfg_.detector) {
    case DetectorKind::ml: {
        auto r = ml_detect(y, g, sys_);
        out.hard_bits = std::move(r.bits);
        break;
    }
    case DetectorKind::msd: {
        const auto aug = augment(layout_->transform(g), y);
        auto r = msd_detect(aug, *layout_);
        out.hard_bits = std::move(r.bits);
        out.counters = r.counters;
        break;
    }
    case DetectorKind::mpa: {
        auto r = log_mpa_detect(y, g, sys_, noise_variance, cfg_.mpa_iterations, cfg_.llr_clamp);
        out.hard_bits = std::move(r.detection.bits);
        out.llrs = std::move(r.llr.values);
        out.counters = r.detection.counters;
        break;
    }
    case DetectorKind::list_msd: {
        const auto aug = augment(layout_->transform(g), y);
        auto r = list_msd(aug, *layout_, noise_variance, cfg_.list_size, cfg_.llr_clamp);
        out.hard_bits = codeword_bits(r.best.codewords, bits);
        out.llrs = std::move(r.llr.values);
        out.counters = r.counters;
        break;
    }
    }
    return out;
}

TrialTally Simulation::uncoded_trial(double snr_db, std::uint64_t index) const
{
    const auto& c = sys_.config;
    const double sigma2 = noise_variance_for_snr(sys_, snr_db);
    Rng rng = trial_stream(cfg_.seed, index);
    std::uniform_int_distribution<std::size_t> pick(0, c.points - 1);
    std::vector<std::size_t> sent(c.users);
    for (auto& s : sent)
        s = pick(rng);

    const auto h = sample_channel(c, cfg_.channel, sigma2, rng);
    const CMatrix g = effective_channel(sys_.mapping, h);
    const CVector y = receive(g, transmit(sys_, sent), draw_noise(c.resources, sigma2, rng));

    const auto out = detect(y, g, sigma2);
    const auto truth = codeword_bits(sent, c.bits_per_symbol());
    std::vector<std::uint8_t> decided = out.hard_bits;
    if (cfg_.detector == DetectorKind::list_msd) {
        // Bitwise sign decisions of the soft output.
        for (std::size_t i = 0; i < decided.size(); ++i)
            decided[i] = out.llrs[i] < 0.0 ? 1 : 0;
    }

    TrialTally t;
    t.bits = truth.size();
    for (std::size_t i = 0; i < truth.size(); ++i)
        t.bit_errors += truth[i] != decided[i];
    t.frames = 1;
    t.frame_errors = t.bit_errors > 0;
    t.detections = 1;
    t.counters = out.counters;
    return t;
}

Simulation::CodedTally Simulation::coded_trial(double snr_db, std::uint64_t index) const
{
    const auto& c = sys_.config;
    const std::size_t bits = c.bits_per_symbol();
    const std::size_t n_c = cfg_.codeword_length;
    const std::size_t info_len = ConvolutionalCode::info_length(n_c);
    const std::size_t slots = n_c / bits;
    const double sigma2 = noise_variance_for_snr(sys_, snr_db);
    const Interleaver pi(n_c);
    Rng rng = trial_stream(cfg_.seed, index);

    std::bernoulli_distribution coin(0.5);
    std::vector<std::vector<std::uint8_t>> info(c.users), tx(c.users);
    for (std::size_t k = 0; k < c.users; ++k) {
        info[k].resize(info_len);
        for (auto& b : info[k])
            b = coin(rng) ? 1 : 0;
        const auto code = ConvolutionalCode::encode(info[k]);
        tx[k] = pi.interleave<std::uint8_t>(code);
    }

    std::vector<std::vector<double>> soft(c.users, std::vector<double>(n_c));
    std::vector<std::vector<double>> hard(c.users, std::vector<double>(n_c));
    OpCounters counters;
    std::vector<std::size_t> sent(c.users);
    for (std::size_t t = 0; t < slots; ++t) {
        for (std::size_t k = 0; k < c.users; ++k) {
            std::size_t cw = 0;
            for (std::size_t m = 0; m < bits; ++m)
                cw = (cw << 1) | tx[k][t * bits + m];
            sent[k] = cw;
        }
        const auto h = sample_channel(c, cfg_.channel, sigma2, rng);
        const CMatrix g = effective_channel(sys_.mapping, h);
        const CVector y = receive(g, transmit(sys_, sent), draw_noise(c.resources, sigma2, rng));

        const auto out = detect(y, g, sigma2);
        counters += out.counters;
        for (std::size_t k = 0; k < c.users; ++k)
            for (std::size_t m = 0; m < bits; ++m) {
                const std::size_t i = k * bits + m;
                const double hv = out.hard_bits[i] ? -cfg_.llr_clamp : cfg_.llr_clamp;
                hard[k][t * bits + m] = hv;
                soft[k][t * bits + m] = out.llrs.empty() ? hv : out.llrs[i];
            }
    }

    CodedTally r;
    for (auto* tally : {&r.soft, &r.hard}) {
        tally->bits = c.users * info_len;
        tally->frames = c.users;
        tally->detections = slots;
        tally->counters = counters;
    }
    for (std::size_t k = 0; k < c.users; ++k) {
        const auto ds = ConvolutionalCode::decode(pi.deinterleave<double>(soft[k]));
        const auto dh = ConvolutionalCode::decode(pi.deinterleave<double>(hard[k]));
        std::uint64_t es = 0, eh = 0;
        for (std::size_t i = 0; i < info_len; ++i) {
            es += ds[i] != info[k][i];
            eh += dh[i] != info[k][i];
        }
        r.soft.bit_errors += es;
        r.soft.frame_errors += es > 0;
        r.hard.bit_errors += eh;
        r.hard.frame_errors += eh > 0;
    }
    return r;
}

TrialTally Simulation::run_point(double snr_db) const
{
    const std::size_t n = cfg_.trials;
    std::vector<TrialTally> per_trial(n);
    auto work = [&](std::size_t worker) {
        for (std::size_t i = worker; i < n; i += cfg_.threads) {
            if (cfg_.coded) {
                const auto r = coded_trial(snr_db, i);
                per_trial[i] = cfg_.llr_input == LlrInput::soft ? r.soft : r.hard;
            } else {
                per_trial[i] = uncoded_trial(snr_db, i);
            }
        }
    };
    if (cfg_.threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < cfg_.threads; ++w)
            pool.emplace_back(work, w);
    }
    TrialTally total;
    for (const auto& t : per_trial)
        total += t;
    return total;
}

std::vector<ResultRecord> Simulation::run() const
{
    std::vector<ResultRecord> out;
    for (double snr : cfg_.snr_db) {
        const auto start = std::chrono::steady_clock::now();
        const TrialTally t = run_point(snr);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(make_record(snr, cfg_.trials, t, cfg_.record_wall_time ? elapsed : 0.0));
    }
    return out;
}

ResultRecord make_record(double snr_db, std::uint64_t trials, const TrialTally& t, double wall_time)
{
    ResultRecord r;
    r.snr_db = snr_db;
    r.trials = trials;
    r.bit_errors = t.bit_errors;
    r.ber = t.bits ? static_cast<double>(t.bit_errors) / static_cast<double>(t.bits) : 0.0;
    r.frame_errors = t.frame_errors;
    r.fer = t.frames ? static_cast<double>(t.frame_errors) / static_cast<double>(t.frames) : 0.0;
    const double d = t.detections ? static_cast<double>(t.detections) : 1.0;
    r.avg_real_adds = static_cast<double>(t.counters.real_adds) / d;
    r.avg_real_mults = static_cast<double>(t.counters.real_mults) / d;
    r.avg_exp_log = static_cast<double>(t.counters.exp_log) / d;
    r.avg_N_v1 = static_cast<double>(t.counters.visited_head) / d;
    r.avg_N_v2 = static_cast<double>(t.counters.visited_tail) / d;
    r.wall_time = wall_time;
    return r;
}

std::vector<ResultRecord> run_sweep(const RunConfig& cfg)
{
    return Simulation(cfg).run();
}

// ---------------------------------------------------------------------------

void write_results(std::ostream& out, const std::vector<ResultRecord>& records)
{
    out << kResultHeader << "\n";
    char buf[512];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.17g,%llu,%llu,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.snr_db, static_cast<unsigned long long>(r.trials),
                      static_cast<unsigned long long>(r.bit_errors), r.ber,
                      static_cast<unsigned long long>(r.frame_errors), r.fer, r.avg_real_adds, r.avg_real_mults,
                      r.avg_exp_log, r.avg_N_v1, r.avg_N_v2, r.wall_time);
        out << buf;
    }
}

void write_results(const std::string& path, const std::vector<ResultRecord>& records)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write results to '" + path + "'");
    write_results(out, records);
    out.flush();
    if (!out)
        throw Error("failed writing results to '" + path + "'");
}

std::vector<ResultRecord> read_results(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || trim(line) != kResultHeader)
        throw Error("results file has an unexpected header");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(trim(cell));
        if (f.size() != 12)
            throw Error("results row has " + std::to_string(f.size()) + " fields, expected 12");
        ResultRecord r;
        r.snr_db = parse_double(f[0], "snr_db");
        r.trials = parse_unsigned(f[1], "trials");
        r.bit_errors = parse_unsigned(f[2], "bit_errors");
        r.ber = parse_double(f[3], "ber");
        r.frame_errors = parse_unsigned(f[4], "frame_errors");
        r.fer = parse_double(f[5], "fer");
        r.avg_real_adds = parse_double(f[6], "avg_real_adds");
        r.avg_real_mults = parse_double(f[7], "avg_real_mults");
        r.avg_exp_log = parse_double(f[8], "avg_exp_log");
        r.avg_N_v1 = parse_double(f[9], "avg_N_v1");
        r.avg_N_v2 = parse_double(f[10], "avg_N_v2");
        r.wall_time = parse_double(f[11], "wall_time");
        out.push_back(r);
    }
    return out;
}

} // namespace scma
