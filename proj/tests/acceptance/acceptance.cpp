#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/helpers.hpp"
#include "scma/ml_oracle.hpp"
#include "scma/mpa.hpp"
#include "scma/msd.hpp"
#include "scma/simulator.hpp"

using namespace scma;
using scma::test::random_instance;
using scma::test::rel_diff;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void note(const std::string& s)
{
    std::fprintf(stderr, "  %s\n", s.c_str());
}

// MSD and the oracle agree on the decision and the metric.
void criterion1()
{
    const auto sys = builtin_qam4();
    const auto layout = DetectionLayout::for_system(sys);
    Rng rng(101);
    std::size_t n = 0, mismatched = 0;
    for (auto model : {ChannelModel::rayleigh_flat, ChannelModel::awgn})
        for (int snr = 0; snr <= 12; ++snr)
            for (int i = 0; i < 3847; ++i, ++n) {
                const auto in = random_instance(sys, snr, model, rng);
                const auto ml = ml_detect(in.y, in.g, sys, MlStrategy::exhaustive);
                const auto msd = msd_detect(augment(layout.transform(in.g), in.y), layout);
                if (msd.codewords != ml.codewords || rel_diff(msd.metric, ml.metric) > 1e-12)
                    ++mismatched;
            }
    report(1, n >= 100000 && mismatched == 0,
           fmt("MSD == ML on %zu qam4 instances (Rayleigh+AWGN, 0..12 dB), %zu mismatches", n, mismatched));
}

// ||y~ - G~x||^2 = ||y - Gx||^2 + ||x^(2)||^2 for every hypothesis.
void criterion2()
{
    const auto sys = builtin_qam4();
    const auto& cfg = sys.config;
    Rng rng(202);
    double worst = 0.0;
    std::size_t argmin_mismatch = 0, hypotheses = 0;
    for (int draw = 0; draw < 100; ++draw) {
        const auto in = random_instance(sys, 4.0 + 0.1 * draw, ChannelModel::rayleigh_flat, rng);
        const auto aug = augment(in.g, in.y);
        double best_aug = INFINITY, best_orig = INFINITY;
        std::vector<std::size_t> arg_aug, arg_orig;
        std::vector<std::size_t> cw(cfg.users, 0);
        for (std::size_t h = 0; h < 4096; ++h, ++hypotheses) {
            for (std::size_t k = 0, r = h; k < cfg.users; ++k, r /= cfg.points)
                cw[cfg.users - 1 - k] = r % cfg.points;
            const CVector x = scma::test::stack(sys, cw);
            double lhs = 0.0, rhs = 0.0;
            for (std::size_t r = 0; r < aug.g_tilde.rows(); ++r) {
                Complex s = aug.y_tilde[r];
                for (std::size_t c = 0; c < aug.g_tilde.cols(); ++c)
                    s -= aug.g_tilde(r, c) * x[c];
                lhs += std::norm(s);
            }
            for (std::size_t r = 0; r < cfg.resources; ++r) {
                Complex s = in.y[r];
                for (std::size_t c = 0; c < cfg.layers; ++c)
                    s -= in.g(r, c) * x[c];
                rhs += std::norm(s);
            }
            for (std::size_t c = cfg.resources; c < cfg.layers; ++c)
                rhs += std::norm(x[c]);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
            if (lhs < best_aug) {
                best_aug = lhs;
                arg_aug = cw;
            }
            if (rhs < best_orig) {
                best_orig = rhs;
                arg_orig = cw;
            }
        }
        if (arg_aug != arg_orig)
            ++argmin_mismatch;
    }
    report(2, worst <= 1e-9 && argmin_mismatch == 0,
           fmt("%zu hypotheses over 100 draws, max relative gap %.3g, %zu argmin mismatches", hypotheses, worst,
               argmin_mismatch));
}

// Omega reconstruction and 16-QAM MSD against the oracle.
void criterion3()
{
    bool exact = true;
    for (int half : {3, 7}) {
        std::vector<std::vector<CVector>> pts(1);
        for (int re = -half; re <= half; re += 2)
            for (int im = -half; im <= half; im += 2)
                pts[0].push_back({Complex(re, im)});
        const Codebook cb(1, pts);
        const auto om = omega_decompose(cb);
        for (std::size_t c = 0; c < cb.size(); ++c) {
            Complex sum(0.0, 0.0);
            for (std::size_t j = 0; j < om.depth; ++j)
                sum += std::pow(2.0, double(om.depth - 1 - j)) * om.components[0][c][j];
            exact = exact && sum == cb.point(0, c)[0] && om.reconstruct(0, c)[0] == cb.point(0, c)[0];
        }
    }
    const auto sys = builtin_qam16();
    const auto layout = DetectionLayout::for_system(sys);
    Rng rng(303);
    std::size_t n = 0, mismatched = 0;
    for (; n < 10000; ++n) {
        const double snr = 10.0 + 20.0 * double(n % 11) / 10.0;
        const auto model = n % 2 ? ChannelModel::awgn : ChannelModel::rayleigh_flat;
        const auto in = random_instance(sys, snr, model, rng);
        const auto ml = ml_detect(in.y, in.g, sys);
        const auto msd = msd_detect(augment(layout.transform(in.g), in.y), layout);
        if (msd.codewords != ml.codewords || rel_diff(msd.metric, ml.metric) > 1e-9)
            ++mismatched;
    }
    report(3, exact && mismatched == 0,
           fmt("16/64-QAM reconstruction %s; MSD == ML on %zu 16-QAM instances (10..30 dB), %zu mismatches",
               exact ? "exact" : "inexact", n, mismatched));
}

// List LLRs against the exhaustive posterior.
void criterion4()
{
    const auto sys = builtin_qam4();
    const auto layout = DetectionLayout::for_system(sys);
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto in = random_instance(sys, 2.0 * (i % 10), ChannelModel::rayleigh_flat, rng);
        const auto aug = augment(layout.transform(in.g), in.y);
        const auto list = list_msd(aug, layout, in.noise_variance, 4096);
        const auto app = exhaustive_app_llr(aug, layout, in.noise_variance);
        for (std::size_t b = 0; b < app.values.size(); ++b)
            worst = std::max(worst, std::abs(list.llr.values[b] - app.values[b]));
    }

    // Operating point where MSD BER is about 1e-2 on flat Rayleigh.
    const double snr = 21.0;
    RunConfig rc;
    rc.snr_db = {snr};
    rc.trials = 20000;
    rc.seed = 44;
    const auto ber = run_sweep(rc).front().ber;

    std::size_t agree = 0, total = 0;
    for (int i = 0; i < 5000; ++i) {
        const auto in = random_instance(sys, snr, ChannelModel::rayleigh_flat, rng);
        const auto aug = augment(layout.transform(in.g), in.y);
        const auto list = list_msd(aug, layout, in.noise_variance, 600);
        const auto app = exhaustive_app_llr(aug, layout, in.noise_variance);
        for (std::size_t b = 0; b < app.values.size(); ++b, ++total)
            agree += (list.llr.values[b] < 0.0) == (app.values[b] < 0.0);
    }
    const double rate = double(agree) / double(total);
    report(4, worst <= 1e-9 && rate >= 0.99,
           fmt("N_cand=4096 max |dLLR| %.3g on 100 instances; N_cand=600 sign agreement %.5f over %zu bits at %.0f "
               "dB (MSD BER %.4f)",
               worst, rate, total, snr, ber));
}

struct PointStats {
    double ber = 0.0;
    double se = 0.0; // trial-level standard error of ber
    std::uint64_t errors = 0;
};

PointStats measure(const Simulation& sim, double snr)
{
    const std::uint64_t n = sim.config().trials;
    double sum = 0.0, sq = 0.0;
    std::uint64_t errors = 0, bits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto t = sim.uncoded_trial(snr, i);
        const double r = double(t.bit_errors) / double(t.bits);
        sum += r;
        sq += r * r;
        errors += t.bit_errors;
        bits += t.bits;
    }
    const double mean = sum / double(n);
    const double var = (sq - double(n) * mean * mean) / double(n - 1);
    return {double(errors) / double(bits), std::sqrt(var / double(n)), errors};
}

// log-MPA BER against MSD BER within 3 standard errors of the MSD estimate.
void criterion5()
{
    std::string detail;
    bool ok = true;
    std::size_t compared = 0;
    auto sweep = [&](const char* label, const std::string& codebook, ChannelModel ch, std::vector<double> snrs,
                     std::size_t iterations, std::size_t trials) {
        RunConfig base;
        base.codebook = codebook;
        base.channel = ch;
        base.trials = trials;
        base.seed = 55;
        base.snr_db = snrs;
        RunConfig mpa = base;
        mpa.detector = DetectorKind::mpa;
        mpa.mpa_iterations = iterations;
        const Simulation s_msd(base), s_mpa(mpa);
        for (double snr : snrs) {
            const auto a = measure(s_msd, snr);
            const auto b = measure(s_mpa, snr);
            const bool counted = a.errors >= 100 && b.errors >= 100;
            const double z = a.se > 0.0 ? (b.ber - a.ber) / a.se : 0.0;
            const bool within = std::abs(z) <= 3.0;
            note(fmt("%s %5.1f dB: MSD %.5f (se %.5f, %llu err) MPA(%zu) %.5f (%llu err) z=%+.2f%s", label, snr, a.ber,
                     a.se, (unsigned long long)a.errors, iterations, b.ber, (unsigned long long)b.errors, z,
                     counted ? (within ? "" : " outside") : " skipped"));
            if (!counted)
                continue;
            ++compared;
            if (!within) {
                ok = false;
                detail += fmt(" %s@%.0fdB z=%+.1f;", label, snr, z);
            }
        }
    };
    sweep("qam4-awgn", "builtin:qam4", ChannelModel::awgn, {0, 2, 4, 6, 8, 10, 12}, 12, 10000);
    sweep("qam16-rayleigh", "builtin:qam16", ChannelModel::rayleigh_flat, {30, 35}, 5, 4000);
    report(5, ok && compared > 0,
           fmt("%zu points with >=100 errors compared", compared) + (detail.empty() ? "" : "; outside 3 se:" + detail));
}

// Counter conformance.
void criterion6()
{
    const auto sys = builtin_qam4();
    const auto layout = DetectionLayout::for_system(sys);
    Rng rng(606);
    bool mpa_ok = true;
    std::string mpa_detail;
    for (std::size_t ni : {1, 3, 12}) {
        const auto in = random_instance(sys, 8.0, ChannelModel::rayleigh_flat, rng);
        const auto got = log_mpa_detect(in.y, in.g, sys, in.noise_variance, ni).detection.counters;
        const auto want = predicted_mpa_ops(4, 4, 3, 2, ni);
        mpa_ok = mpa_ok && got == want;
        mpa_detail += fmt(" N_i=%zu adds %llu mults %llu exp/log %llu;", ni, (unsigned long long)got.real_adds,
                          (unsigned long long)got.real_mults, (unsigned long long)got.exp_log);
    }
    const auto three = predicted_mpa_ops(4, 4, 3, 2, 3);
    mpa_ok = mpa_ok && three.real_mults == 9456 && three.exp_log == 2449;

    std::size_t msd_bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto in = random_instance(sys, 1.0 * (i % 17), ChannelModel::rayleigh_flat, rng);
        const auto c = msd_detect(augment(layout.transform(in.g), in.y), layout).counters;
        const auto want = predicted_msd_ops(3, c.visited_head, c.visited_tail);
        if (c.real_adds != want.real_adds || c.real_mults != want.real_mults || c.exp_log != 0)
            ++msd_bad;
    }
    report(6, mpa_ok && msd_bad == 0,
           "MPA" + mpa_detail + fmt(" MSD identity violated on %zu of 1000 runs", msd_bad));
}

// MSD cost trend against log-MPA with 3 iterations.
void criterion7()
{
    RunConfig rc;
    rc.snr_db = {0, 4, 8, 12, 16};
    rc.trials = 10000;
    rc.seed = 77;
    const auto records = run_sweep(rc);
    const double mpa = combined_cost(predicted_mpa_ops(4, 4, 3, 2, 3));
    bool decreasing = true;
    std::string series;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double cost = records[i].avg_real_adds + records[i].avg_real_mults;
        series += fmt(" %.0f", cost);
        if (i > 0 && cost >= records[i - 1].avg_real_adds + records[i - 1].avg_real_mults)
            decreasing = false;
        note(fmt("%4.0f dB: adds %.1f mults %.1f N_v1 %.1f N_v2 %.1f", records[i].snr_db, records[i].avg_real_adds,
                 records[i].avg_real_mults, records[i].avg_N_v1, records[i].avg_N_v2));
    }
    const double top = records.back().avg_real_adds + records.back().avg_real_mults;
    report(7, decreasing && top < mpa,
           fmt("MSD adds+mults over 0..16 dB:%s (%s); at 16 dB %.0f vs log-MPA(3) %.0f", series.c_str(),
               decreasing ? "strictly decreasing" : "not monotone", top, mpa));
}

// Coded pipeline: soft versus hard LLR input, and reproducible output.
void criterion8()
{
    RunConfig rc;
    rc.detector = DetectorKind::list_msd;
    rc.coded = true;
    rc.codeword_length = 132;
    rc.list_size = 600;
    rc.trials = 16667;
    rc.seed = 88;
    rc.snr_db = {4.0, 8.0, 12.0};
    const Simulation sim(rc);
    bool ok = true;
    std::string detail;
    for (double snr : rc.snr_db) {
        TrialTally soft, hard;
        for (std::uint64_t i = 0; i < rc.trials; ++i) {
            const auto t = sim.coded_trial(snr, i);
            soft += t.soft;
            hard += t.hard;
        }
        const double fs = double(soft.frame_errors) / double(soft.frames);
        const double fh = double(hard.frame_errors) / double(hard.frames);
        ok = ok && soft.frames >= 100000 && fs <= fh;
        detail += fmt(" %.0f dB soft %.5f hard %.5f (%llu frames);", snr, fs, fh, (unsigned long long)soft.frames);
    }

    RunConfig small = rc;
    small.trials = 40;
    small.snr_db = {6.0, 10.0};
    std::ostringstream a, b, c;
    write_results(a, run_sweep(small));
    write_results(b, run_sweep(small));
    small.threads = 3;
    write_results(c, run_sweep(small));
    const bool same = a.str() == b.str() && a.str() == c.str();
    report(8, ok && same, "FER" + detail + (same ? " CSV reproducible" : " CSV differs between runs"));
}

} // namespace

int main()
{
    void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                            criterion5, criterion6, criterion7, criterion8};
    for (int i = 0; i < 8; ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            report(i + 1, false, std::string("error: ") + e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}
