/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The usbeam Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef USBEAM_IO_HPP
#define USBEAM_IO_HPP

#include <filesystem>

#include "usbeam/types.hpp"

namespace usbeam {

// USCD v1, little-endian:
//   0..3   "USCD"
//   4      version (1)
//   5..7   zero
//   8..19  u32 E, T, L
//   20..35 f32 sample_rate_hz, center_freq_hz, sound_speed_mps, element_pitch_m
//   36     alignment (0 raw, 1 ToF corrected)
//   37..39 zero
//   40..   E*T*L f32 samples, flat index ((e*T)+t)*L+l
inline constexpr std::size_t kUscdHeaderSize = 40;
inline constexpr std::uint8_t kUscdVersion = 1;

/// Throws InvalidArgument on non-finite samples and IoError on write failure.
void write_channel_data(const ChannelData& cd, const std::filesystem::path& path);

/// Throws FormatError for a bad magic, an unsupported version, a truncated
/// payload or dimensions whose payload size overflows; IoError if unreadable.
ChannelData read_channel_data(const std::filesystem::path& path);

/// 16-bit grayscale PNG; pixel p is stored as round(p * 65535).
void write_image(const BModeImage& img, const std::filesystem::path& path);
void write_image(const Image& img, const std::filesystem::path& path);

/// Reads an 8- or 16-bit grayscale PNG into [0, 1].
Image read_image(const std::filesystem::path& path);

/// Masks are stored as 16-bit PNGs (0 or 65535); any nonzero sample reads as set.
void write_mask(const Mask& mask, const std::filesystem::path& path);
Mask read_mask(const std::filesystem::path& path);

}  // namespace usbeam

#endif  // USBEAM_IO_HPP
