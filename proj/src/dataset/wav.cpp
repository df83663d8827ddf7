/* Copyright 2026 The clinaug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "clinaug/wav.hpp"

#include "clinaug/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace clinaug {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string wav_header(std::uint16_t format, std::uint16_t bits, int sample_rate,
                       std::uint32_t data_bytes) {
  std::string h;
  h.reserve(44);
  h += "RIFF";
  put_u32(h, 36 + data_bytes);
  h += "WAVEfmt ";
  put_u32(h, 16);
  put_u16(h, format);
  put_u16(h, 1);
  put_u32(h, static_cast<std::uint32_t>(sample_rate));
  put_u32(h, static_cast<std::uint32_t>(sample_rate) * (bits / 8));
  put_u16(h, static_cast<std::uint16_t>(bits / 8));
  put_u16(h, bits);
  h += "data";
  put_u32(h, data_bytes);
  return h;
}

}  // namespace

WavData read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open WAV file '" + path.string() + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = " in '" + path.string() + "'";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error("not a RIFF/WAVE file" + where);
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw Error("truncated fmt chunk" + where);
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      if (format == kFormatExtensible) {
        if (size < 40) throw Error("truncated extensible fmt chunk" + where);
        format = read_u16(chunk + 8 + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      // Tolerate writers that leave the size field unset or too large.
      data_size = std::min<std::size_t>(size, available);
    }
    pos = body + size + (size & 1U);
  }
  if (!have_fmt) throw Error("missing fmt chunk" + where);
  if (data == nullptr) throw Error("missing data chunk" + where);
  if (channels == 0) throw Error("zero channels" + where);

  WavData wav;
  wav.sample_rate = static_cast<int>(sample_rate);
  wav.channels = channels;
  const std::size_t bytes_per_sample = bits / 8;
  if (bytes_per_sample == 0) throw Error("invalid bit depth" + where);
  const std::size_t n = data_size / bytes_per_sample;
  wav.samples.resize(n);

  if (format == kFormatPcm && bits == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(read_u16(data + 2 * i));
      wav.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else if (format == kFormatPcm && bits == 24) {
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned char* p = data + 3 * i;
      std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
      if (v & 0x800000) v |= ~0xFFFFFF;
      wav.samples[i] = static_cast<float>(v) / 8388608.0f;
    }
  } else if (format == kFormatPcm && bits == 32) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int32_t>(read_u32(data + 4 * i));
      wav.samples[i] = static_cast<float>(static_cast<double>(v) / 2147483648.0);
    }
  } else if (format == kFormatFloat && bits == 32) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t raw = read_u32(data + 4 * i);
      float v;
      std::memcpy(&v, &raw, sizeof v);
      wav.samples[i] = v;
    }
  } else {
    throw Error("unsupported WAV encoding (format " + std::to_string(format) + ", " +
                std::to_string(bits) + " bit)" + where);
  }
  for (float v : wav.samples) {
    if (!std::isfinite(v)) throw Error("non-finite sample" + where);
  }
  wav.samples.resize(wav.frames() * wav.channels);
  return wav;
}

void write_wav_pcm16(const std::filesystem::path& path, std::span<const float> samples,
                     int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out = wav_header(kFormatPcm, 16, sample_rate, data_bytes);
  out.reserve(out.size() + data_bytes);
  for (float s : samples) {
    const float c = std::clamp(s, -1.0f, 1.0f);
    const auto v = static_cast<std::int16_t>(std::lround(c * 32767.0f));
    put_u16(out, static_cast<std::uint16_t>(v));
  }
  write_file(path, out);
}

void write_wav_float32(const std::filesystem::path& path, std::span<const float> samples,
                       int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 4);
  std::string out = wav_header(kFormatFloat, 32, sample_rate, data_bytes);
  out.reserve(out.size() + data_bytes);
  for (float s : samples) {
    std::uint32_t raw;
    std::memcpy(&raw, &s, sizeof raw);
    put_u32(out, raw);
  }
  write_file(path, out);
}

std::vector<float> downmix(const WavData& wav) {
  const std::size_t frames = wav.frames();
  std::vector<float> mono(frames, 0.0f);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (int c = 0; c < wav.channels; ++c) acc += wav.samples[f * wav.channels + c];
    mono[f] = static_cast<float>(acc / wav.channels);
  }
  return mono;
}

}  // namespace clinaug
