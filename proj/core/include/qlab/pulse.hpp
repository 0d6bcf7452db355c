#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qlab {

struct Pulse {
    long duration = 0;      // points
    long start_time = 0;    // point index within a step
    double amplitude = 0;   // [-1, 1]
    double ssm_freq = 0;    // cycles per point, 0 = square
    double phase = 0;       // radians

    void validate() const;
};

// samples of a pulse over one step; zeros outside [start, start+duration)
std::vector<double> pulse_make(const Pulse& p, long step_points);

Pulse pulse_copy(const Pulse& p);
std::string pulse_describe(const Pulse& p);

struct SequenceMatrix {
    long steps = 0, points = 0;
    std::vector<float> data;  // row-major steps x points

    static SequenceMatrix zeros(long steps, long points);
    float& at(long step, long point) { return data[step * points + point]; }
    float at(long step, long point) const { return data[step * points + point]; }
    bool operator==(const SequenceMatrix& o) const = default;
};

// CH k = [channel, marker1, marker2]; CH2/CH4 markers kept but flagged redundant
struct ChannelList {
    long steps = 0, points = 0;
    std::array<std::array<SequenceMatrix, 3>, 4> ch;

    static ChannelList zeros(long steps, long points);
    SequenceMatrix& port(int channel, int target);  // channel 1..4, target 0..2
    const SequenceMatrix& port(int channel, int target) const;
    bool operator==(const ChannelList& o) const = default;
};

enum class SweepType { none, duration, amplitude, start_time, phase };

struct SweepSpec {
    SweepType sweep_type = SweepType::none;
    double start = 0;
    double step = 0;
};

struct InsertReport {
    long clipped_samples = 0;  // channel rows clamped to [-1, 1]
};

// additive insert of the swept pulse into every step row; channel rows clip
// with a warning count, marker rows threshold to {0,1}
InsertReport add_sweep(ChannelList& cl, int channel, int target, const Pulse& base,
                       const SweepSpec& sweep);

struct RabiConfig {
    long steps = 51;
    long points = 8192;
    int qubit_i_ch = 1, qubit_q_ch = 2;
    int cavity_ch = 3;
    int trigger_ch = 1, trigger_marker = 1;  // marker index 1 or 2
    double ssm_freq = 0.0;
    SweepSpec durations;  // duration sweep for the qubit drive
    Pulse qubit_pulse;    // template; duration swept
    Pulse cavity_pulse;
    Pulse trigger_pulse;
};

RabiConfig rabi_config_from_json(const std::string& json_text);

ChannelList compile_rabi(const RabiConfig& cfg);

// CSV: one file per port (path + "_CH1.csv" etc), rows = steps
// QSEQ: "QSEQ" magic, u16 LE version 1, u32 LE steps, u32 LE points, then
// row-major f32 LE per port in order CH1,CH1M1,CH1M2,...,CH4M2
void export_sequence_csv(const ChannelList& cl, const std::string& path_prefix);
void export_sequence_bin(const ChannelList& cl, const std::string& path);
ChannelList import_sequence_bin(const std::string& path);

extern const std::array<const char*, 12> kPortNames;

}  // namespace qlab
