// Copyright 2026 The s17 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef S17_NN_SERIALIZE_HPP_
#define S17_NN_SERIALIZE_HPP_

#include <cstdint>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "s17/nn/dense.hpp"

namespace s17::nn {

/// Versioned flat container of named tensors plus a free-form metadata
/// string. Values keep their scalar width (4 or 8 bytes) and round-trip
/// bit-exactly. Layout (little endian):
///   "S17T" u32 version | u32 len, metadata | u32 count |
///   count x { u32 len, name | u32 rows | u32 cols | u8 width | data, column-major }
class TensorArchive {
   public:
    static constexpr uint32_t kVersion = 1;

    struct Tensor {
        uint32_t rows = 0, cols = 0;
        uint8_t width = 8;
        std::vector<unsigned char> bytes;
    };

    std::string metadata;

    template <typename Scalar>
    void put(const std::string& name, const Matrix<Scalar>& m) {
        static_assert(std::is_same_v<Scalar, float> || std::is_same_v<Scalar, double>);
        Tensor t;
        t.rows = static_cast<uint32_t>(m.rows());
        t.cols = static_cast<uint32_t>(m.cols());
        t.width = sizeof(Scalar);
        t.bytes.resize(m.size() * sizeof(Scalar));
        if (m.size()) std::memcpy(t.bytes.data(), m.data(), t.bytes.size());
        tensors_[name] = std::move(t);
    }

    /// Throws std::runtime_error if the name is missing or the shape or scalar
    /// width disagree with `m`'s current shape and type.
    template <typename Scalar>
    void get(const std::string& name, Matrix<Scalar>& m) const {
        const auto it = tensors_.find(name);
        if (it == tensors_.end()) throw std::runtime_error("tensor '" + name + "' missing");
        const Tensor& t = it->second;
        if (t.width != sizeof(Scalar)) throw std::runtime_error("tensor '" + name + "' has a different scalar width");
        if (t.rows != m.rows() || t.cols != m.cols()) {
            throw std::runtime_error("tensor '" + name + "' has shape " + std::to_string(t.rows) + "x" +
                                     std::to_string(t.cols) + ", expected " + std::to_string(m.rows()) + "x" +
                                     std::to_string(m.cols()));
        }
        if (m.size()) std::memcpy(m.data(), t.bytes.data(), t.bytes.size());
    }

    bool contains(const std::string& name) const { return tensors_.count(name) != 0; }
    size_t size() const { return tensors_.size(); }

    void write(std::ostream& os) const {
        os.write("S17T", 4);
        put_u32(os, kVersion);
        put_u32(os, static_cast<uint32_t>(metadata.size()));
        os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
        put_u32(os, static_cast<uint32_t>(tensors_.size()));
        for (const auto& [name, t] : tensors_) {
            put_u32(os, static_cast<uint32_t>(name.size()));
            os.write(name.data(), static_cast<std::streamsize>(name.size()));
            put_u32(os, t.rows);
            put_u32(os, t.cols);
            os.put(static_cast<char>(t.width));
            os.write(reinterpret_cast<const char*>(t.bytes.data()), static_cast<std::streamsize>(t.bytes.size()));
        }
        if (!os) throw std::runtime_error("tensor archive: write failed");
    }

    static TensorArchive read(std::istream& is) {
        char magic[4];
        is.read(magic, 4);
        if (!is || std::memcmp(magic, "S17T", 4) != 0) throw std::runtime_error("tensor archive: bad magic");
        const uint32_t version = get_u32(is);
        if (version != kVersion) {
            throw std::runtime_error("tensor archive: unsupported version " + std::to_string(version));
        }
        TensorArchive a;
        a.metadata = get_string(is, get_u32(is));
        const uint32_t count = get_u32(is);
        for (uint32_t k = 0; k < count; ++k) {
            const std::string name = get_string(is, get_u32(is));
            Tensor t;
            t.rows = get_u32(is);
            t.cols = get_u32(is);
            t.width = static_cast<uint8_t>(is.get());
            if (t.width != 4 && t.width != 8) throw std::runtime_error("tensor archive: bad scalar width");
            t.bytes.resize(static_cast<size_t>(t.rows) * t.cols * t.width);
            is.read(reinterpret_cast<char*>(t.bytes.data()), static_cast<std::streamsize>(t.bytes.size()));
            if (!is) throw std::runtime_error("tensor archive: truncated tensor '" + name + "'");
            a.tensors_[name] = std::move(t);
        }
        return a;
    }

   private:
    static void put_u32(std::ostream& os, uint32_t v) {
        const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
        os.write(reinterpret_cast<const char*>(b), 4);
    }

    static uint32_t get_u32(std::istream& is) {
        unsigned char b[4];
        is.read(reinterpret_cast<char*>(b), 4);
        if (!is) throw std::runtime_error("tensor archive: truncated");
        return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<uint32_t>(b[3]) << 24);
    }

    static std::string get_string(std::istream& is, uint32_t n) {
        if (n > (1u << 26)) throw std::runtime_error("tensor archive: implausible string length");
        std::string s(n, '\0');
        is.read(s.data(), n);
        if (!is) throw std::runtime_error("tensor archive: truncated");
        return s;
    }

    std::map<std::string, Tensor> tensors_;
};

}  // namespace s17::nn

#endif  // S17_NN_SERIALIZE_HPP_
