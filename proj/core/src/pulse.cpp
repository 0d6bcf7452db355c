#include "qlab/pulse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace qlab {

const std::array<const char*, 12> kPortNames = {
    "CH1", "CH1M1", "CH1M2", "CH2", "CH2M1", "CH2M2",
    "CH3", "CH3M1", "CH3M2", "CH4", "CH4M1", "CH4M2"};

void Pulse::validate() const {
    if (duration < 0) throw std::domain_error("pulse duration must be >= 0");
    if (start_time < 0) throw std::domain_error("pulse start_time must be >= 0");
    if (std::abs(amplitude) > 1.0) throw std::domain_error("pulse amplitude outside DAC range [-1,1]");
}

std::vector<double> pulse_make(const Pulse& p, long step_points) {
    p.validate();
    if (p.start_time + p.duration > step_points)
        throw std::out_of_range("pulse exceeds step length");
    std::vector<double> out(step_points, 0.0);
    const double two_pi = 6.283185307179586476925;
    for (long n = p.start_time; n < p.start_time + p.duration; ++n) {
        if (p.ssm_freq == 0.0)
            out[n] = p.amplitude;
        else
            // phase referenced to the step's t=0, not the pulse start
            out[n] = p.amplitude * std::cos(two_pi * p.ssm_freq * n + p.phase);
    }
    return out;
}

Pulse pulse_copy(const Pulse& p) { return p; }

std::string pulse_describe(const Pulse& p) {
    char buf[256];
    if (p.ssm_freq == 0.0)
        std::snprintf(buf, sizeof buf, "Pulse(duration=%ld, start_time=%ld, amplitude=%g)",
                      p.duration, p.start_time, p.amplitude);
    else
        std::snprintf(buf, sizeof buf,
                      "Pulse(duration=%ld, start_time=%ld, amplitude=%g, ssm_freq=%g, phase=%g)",
                      p.duration, p.start_time, p.amplitude, p.ssm_freq, p.phase);
    return buf;
}

SequenceMatrix SequenceMatrix::zeros(long steps, long points) {
    SequenceMatrix m;
    m.steps = steps;
    m.points = points;
    m.data.assign(static_cast<size_t>(steps) * points, 0.0f);
    return m;
}

ChannelList ChannelList::zeros(long steps, long points) {
    if (steps < 1) throw std::domain_error("sequence needs at least one step");
    if (points < 1 || (points & (points - 1)) != 0)
        throw std::domain_error("step length must be a power of 2");
    ChannelList cl;
    cl.steps = steps;
    cl.points = points;
    for (auto& entry : cl.ch)
        for (auto& m : entry) m = SequenceMatrix::zeros(steps, points);
    return cl;
}

SequenceMatrix& ChannelList::port(int channel, int target) {
    if (channel < 1 || channel > 4 || target < 0 || target > 2)
        throw std::invalid_argument("channel must be 1..4 and target 0..2");
    return ch[channel - 1][target];
}

const SequenceMatrix& ChannelList::port(int channel, int target) const {
    return const_cast<ChannelList*>(this)->port(channel, target);
}

InsertReport add_sweep(ChannelList& cl, int channel, int target, const Pulse& base,
                       const SweepSpec& sweep) {
    SequenceMatrix& m = cl.port(channel, target);
    InsertReport rep;
    for (long k = 0; k < cl.steps; ++k) {
        Pulse p = base;
        const double v = sweep.start + k * sweep.step;
        switch (sweep.sweep_type) {
            case SweepType::none: break;
            case SweepType::duration:
                if (v < 0) throw std::domain_error("duration sweep went negative");
                p.duration = std::lround(v);
                break;
            case SweepType::amplitude: p.amplitude = v; break;
            case SweepType::start_time:
                if (v < 0) throw std::domain_error("start_time sweep went negative");
                p.start_time = std::lround(v);
                break;
            case SweepType::phase: p.phase = v; break;
        }
        auto samples = pulse_make(p, cl.points);
        for (long n = 0; n < cl.points; ++n) {
            double s = m.at(k, n) + samples[n];
            if (target == 0) {
                if (s > 1.0) {
                    s = 1.0;
                    rep.clipped_samples++;
                } else if (s < -1.0) {
                    s = -1.0;
                    rep.clipped_samples++;
                }
            } else {
                s = (s >= 0.5) ? 1.0 : 0.0;
            }
            m.at(k, n) = static_cast<float>(s);
        }
    }
    return rep;
}

RabiConfig rabi_config_from_json(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    auto pulse_of = [](const nlohmann::json& pj) {
        Pulse p;
        p.duration = pj.value("duration", 0L);
        p.start_time = pj.value("start_time", 0L);
        p.amplitude = pj.value("amplitude", 1.0);
        p.ssm_freq = pj.value("ssm_freq", 0.0);
        p.phase = pj.value("phase", 0.0);
        return p;
    };
    RabiConfig cfg;
    cfg.steps = j.value("steps", 51L);
    cfg.points = j.value("points", 8192L);
    if (j.contains("qubit_ch")) {
        cfg.qubit_i_ch = j["qubit_ch"].at(0).get<int>();
        cfg.qubit_q_ch = j["qubit_ch"].at(1).get<int>();
    }
    cfg.cavity_ch = j.value("cavity_ch", 3);
    if (j.contains("trigger_marker")) {
        cfg.trigger_ch = j["trigger_marker"].at(0).get<int>();
        cfg.trigger_marker = j["trigger_marker"].at(1).get<int>();
    }
    cfg.ssm_freq = j.value("ssm_freq", 0.0);
    if (j.contains("durations")) {
        cfg.durations.sweep_type = SweepType::duration;
        cfg.durations.start = j["durations"].value("start", 0.0);
        cfg.durations.step = j["durations"].value("step", 0.0);
    }
    if (j.contains("qubit_pulse")) cfg.qubit_pulse = pulse_of(j["qubit_pulse"]);
    else cfg.qubit_pulse.amplitude = 1.0;
    if (j.contains("cavity_pulse")) cfg.cavity_pulse = pulse_of(j["cavity_pulse"]);
    if (j.contains("trigger_pulse")) cfg.trigger_pulse = pulse_of(j["trigger_pulse"]);
    return cfg;
}

ChannelList compile_rabi(const RabiConfig& cfg) {
    if (cfg.trigger_marker < 1 || cfg.trigger_marker > 2)
        throw std::invalid_argument("trigger marker must be 1 or 2");
    ChannelList cl = ChannelList::zeros(cfg.steps, cfg.points);
    Pulse qi = cfg.qubit_pulse;
    qi.ssm_freq = cfg.ssm_freq;
    Pulse qq = qi;
    qq.phase += 1.5707963267948966192;  // Q lags I by a quarter carrier period
    add_sweep(cl, cfg.qubit_i_ch, 0, qi, cfg.durations);
    add_sweep(cl, cfg.qubit_q_ch, 0, qq, cfg.durations);
    add_sweep(cl, cfg.cavity_ch, 0, cfg.cavity_pulse, SweepSpec{});
    add_sweep(cl, cfg.trigger_ch, cfg.trigger_marker, cfg.trigger_pulse, SweepSpec{});
    return cl;
}

void export_sequence_csv(const ChannelList& cl, const std::string& path_prefix) {
    for (int port = 0; port < 12; ++port) {
        const SequenceMatrix& m = cl.port(port / 3 + 1, port % 3);
        std::ofstream f(path_prefix + "_" + kPortNames[port] + ".csv");
        if (!f) throw std::runtime_error("cannot write " + path_prefix);
        char buf[32];
        for (long k = 0; k < m.steps; ++k) {
            for (long n = 0; n < m.points; ++n) {
                std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(m.at(k, n)));
                f << (n ? "," : "") << buf;
            }
            f << '\n';
        }
    }
}

void export_sequence_bin(const ChannelList& cl, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    const uint16_t version = 1;
    const uint32_t steps = static_cast<uint32_t>(cl.steps), points = static_cast<uint32_t>(cl.points);
    f.write("QSEQ", 4);
    f.write(reinterpret_cast<const char*>(&version), 2);
    f.write(reinterpret_cast<const char*>(&steps), 4);
    f.write(reinterpret_cast<const char*>(&points), 4);
    for (int port = 0; port < 12; ++port) {
        const SequenceMatrix& m = cl.port(port / 3 + 1, port % 3);
        f.write(reinterpret_cast<const char*>(m.data.data()),
                static_cast<std::streamsize>(m.data.size() * sizeof(float)));
    }
    if (!f) throw std::runtime_error("write failed: " + path);
}

ChannelList import_sequence_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    char magic[4];
    uint16_t version;
    uint32_t steps, points;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&version), 2);
    f.read(reinterpret_cast<char*>(&steps), 4);
    f.read(reinterpret_cast<char*>(&points), 4);
    if (!f || std::string(magic, 4) != "QSEQ") throw std::runtime_error("not a QSEQ file");
    if (version != 1) throw std::runtime_error("unsupported QSEQ version");
    ChannelList cl = ChannelList::zeros(steps, points);
    for (int port = 0; port < 12; ++port) {
        SequenceMatrix& m = cl.port(port / 3 + 1, port % 3);
        f.read(reinterpret_cast<char*>(m.data.data()),
               static_cast<std::streamsize>(m.data.size() * sizeof(float)));
    }
    if (!f) throw std::runtime_error("truncated QSEQ file");
    return cl;
}

}  // namespace qlab
