#pragma once

#include <array>

namespace laptime::vehicle {

inline constexpr int kNx = 31;
inline constexpr int kNu = 5;
inline constexpr int kWheels = 4;

// Wheel order: front-right, front-left, rear-right, rear-left.
enum Wheel { FR = 0, FL = 1, RR = 2, RL = 3 };

// State layout: velocities first, then positions, then path coordinates.
namespace ix {
inline constexpr int kVx = 0, kVy = 1, kVz = 2, kRollRate = 3, kPitchRate = 4, kYawRate = 5;
inline constexpr int kWheelVz = 6;    // 4 entries
inline constexpr int kSpinRate = 10;  // 4 entries
inline constexpr int kX = 14, kY = 15, kZ = 16, kRoll = 17, kPitch = 18, kYaw = 19;
inline constexpr int kWheelZ = 20;    // 4 entries
inline constexpr int kSpin = 24;      // 4 entries
inline constexpr int kS = 28, kN = 29, kChi = 30;
}  // namespace ix

namespace iu {
inline constexpr int kSteer = 0;
inline constexpr int kTorque = 1;  // 4 entries
}  // namespace iu

using State = std::array<double, kNx>;
using Control = std::array<double, kNu>;

// Column names used in trajectory files.
inline constexpr std::array<const char*, kNx> kStateNames{
    "vx",     "vy",     "vz",     "roll_rate", "pitch_rate", "yaw_rate", "zu_dot_fr", "zu_dot_fl",
    "zu_dot_rr", "zu_dot_rl", "spin_rate_fr", "spin_rate_fl", "spin_rate_rr", "spin_rate_rl", "X", "Y",
    "Z",      "roll",   "pitch",  "yaw",       "zu_fr",      "zu_fl",    "zu_rr",     "zu_rl",
    "spin_fr", "spin_fl", "spin_rr", "spin_rl",  "s",          "n",        "chi"};
inline constexpr std::array<const char*, kNu> kControlNames{"steer", "torque_fr", "torque_fl", "torque_rr",
                                                            "torque_rl"};

}  // namespace laptime::vehicle
