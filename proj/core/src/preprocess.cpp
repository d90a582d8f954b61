#include "scenagg/preprocess.hpp"

#include <cmath>
#include <limits>

namespace scenagg {

NormMethod norm_method_from_string(const std::string& name) {
    if (name == "zscore") return NormMethod::zscore;
    if (name == "minmax") return NormMethod::minmax;
    if (name == "maxabs") return NormMethod::maxabs;
    if (name == "none") return NormMethod::none;
    fail("BadSpec", "unknown normalization method '" + name + "'");
}

std::string to_string(NormMethod m) {
    switch (m) {
        case NormMethod::zscore: return "zscore";
        case NormMethod::minmax: return "minmax";
        case NormMethod::maxabs: return "maxabs";
        case NormMethod::none: return "none";
    }
    return "unknown";
}

namespace {

struct ChannelStats {
    double mean = 0.0, sigma = 0.0, min = 0.0, max = 0.0, maxabs = 0.0;
};

// Weighted population statistics over every (scenario, hour) sample of the
// given channel group. group < 0 means all channels pooled together.
ChannelStats collect(const ScenarioSet& s, int channel) {
    double wsum = 0.0, mean = 0.0, m2 = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    const int c0 = channel < 0 ? 0 : channel;
    const int c1 = channel < 0 ? s.channels() : channel + 1;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double w = s.weight(i);
        if (w == 0.0) continue;
        for (int c = c0; c < c1; ++c) {
            for (int t = 0; t < s.hours(); ++t) {
                const double x = s.scenario(i).value(t, c);
                wsum += w;
                const double d = x - mean;
                mean += w * d / wsum;
                m2 += w * d * (x - mean);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
        }
    }
    ChannelStats st;
    st.mean = mean;
    st.sigma = wsum > 0.0 ? std::sqrt(m2 / wsum) : 0.0;
    st.min = lo;
    st.max = hi;
    st.maxabs = std::max(std::abs(lo), std::abs(hi));
    return st;
}

}  // namespace

ScenarioSet NormalizationRecord::inverse(const ScenarioSet& normalized) const {
    std::vector<Scenario> out = normalized.scenarios();
    const bool per_channel = spec.per_channel;
    for (Scenario& s : out) {
        for (int c = 0; c < s.channels; ++c) {
            const std::size_t g = per_channel ? c : 0;
            for (int t = 0; t < s.hours; ++t)
                s.value(t, c) = s.value(t, c) * scale[g] + offset[g];
        }
    }
    return ScenarioSet(std::move(out), normalized.weights(), normalized.channel_labels());
}

NormalizeResult normalize(const ScenarioSet& s, const NormalizationSpec& spec) {
    const int groups = spec.per_channel ? s.channels() : 1;
    NormalizationRecord record;
    record.spec = spec;
    record.scale.assign(groups, 1.0);
    record.offset.assign(groups, 0.0);

    if (spec.method == NormMethod::none)
        return NormalizeResult{s, record};

    for (int g = 0; g < groups; ++g) {
        const ChannelStats st = collect(s, spec.per_channel ? g : -1);
        switch (spec.method) {
            case NormMethod::zscore:
                if (st.sigma <= 0.0)
                    fail("DegenerateChannel", "constant channel under zscore normalization");
                record.scale[g] = st.sigma;
                record.offset[g] = st.mean;
                break;
            case NormMethod::minmax:
                if (st.max <= st.min)
                    fail("DegenerateChannel", "constant channel under minmax normalization");
                record.scale[g] = st.max - st.min;
                record.offset[g] = st.min;
                break;
            case NormMethod::maxabs:
                if (st.maxabs <= 0.0)
                    fail("DegenerateChannel", "zero channel under maxabs normalization");
                record.scale[g] = st.maxabs;
                record.offset[g] = 0.0;
                break;
            case NormMethod::none: break;
        }
    }

    std::vector<Scenario> out = s.scenarios();
    for (Scenario& sc : out) {
        for (int c = 0; c < sc.channels; ++c) {
            const std::size_t g = spec.per_channel ? c : 0;
            for (int t = 0; t < sc.hours; ++t)
                sc.value(t, c) = (sc.value(t, c) - record.offset[g]) / record.scale[g];
        }
    }
    return NormalizeResult{ScenarioSet(std::move(out), s.weights(), s.channel_labels()), record};
}

ScenarioSet rescale_to_source_means(const ScenarioSet& reduced, const ScenarioSet& source) {
    if (reduced.channels() != source.channels() || reduced.hours() != source.hours())
        fail("MismatchedSource", "reduced set dimensions do not match the source");
    const std::vector<double> source_mean = source.channel_means();
    const std::vector<double> reduced_mean = reduced.channel_means();
    std::vector<double> factor(source.channels(), 1.0);
    for (int c = 0; c < source.channels(); ++c) {
        if (reduced_mean[c] == 0.0) {
            if (source_mean[c] != 0.0)
                fail("ZeroRepresentativeMean",
                     "reduced mean is zero on a channel with nonzero source mean");
        } else {
            factor[c] = source_mean[c] / reduced_mean[c];
        }
    }
    std::vector<Scenario> out = reduced.scenarios();
    for (Scenario& s : out)
        for (int c = 0; c < s.channels; ++c)
            for (int t = 0; t < s.hours; ++t) s.value(t, c) *= factor[c];
    return ScenarioSet(std::move(out), reduced.weights(), reduced.channel_labels());
}

Partition rescale_representatives(const Partition& p, const ScenarioSet& source) {
    if (p.rep_kind == RepKind::centroid)
        fail("BadRepKind", "centroid representatives are already weight-consistent");
    validate_partition(p, source);

    const int channels = source.channels();
    const int hours = source.hours();
    const std::vector<double> source_mean = source.channel_means();

    // Weighted mean of the representative profiles, per channel.
    std::vector<double> rep_mean(channels, 0.0);
    double wtot = 0.0;
    for (int k = 0; k < p.k(); ++k) {
        const double w = p.cluster_weights[k];
        wtot += w;
        for (int c = 0; c < channels; ++c) {
            double sum = 0.0;
            for (int t = 0; t < hours; ++t) sum += p.representatives[k].value(t, c);
            rep_mean[c] += w * sum / hours;
        }
    }
    for (double& m : rep_mean) m /= wtot;

    std::vector<double> factor(channels, 1.0);
    for (int c = 0; c < channels; ++c) {
        if (rep_mean[c] == 0.0) {
            if (source_mean[c] != 0.0)
                fail("ZeroRepresentativeMean",
                     "representative mean is zero on a channel with nonzero source mean");
            factor[c] = 1.0;
        } else {
            factor[c] = source_mean[c] / rep_mean[c];
        }
    }

    Partition out = p;
    for (Scenario& rep : out.representatives)
        for (int c = 0; c < channels; ++c)
            for (int t = 0; t < hours; ++t) rep.value(t, c) *= factor[c];
    return out;
}

}  // namespace scenagg
