#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tfad/matrix.hpp"

namespace tfad {

// Little-endian flat binary io. Each file starts with an 8-byte magic tag that
// doubles as a format version.
class BinaryWriter {
  public:
    explicit BinaryWriter(const std::string& path);

    void magic(const char tag[8]);
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void f64(double v);
    void str(const std::string& s);
    void matrix(const Matrix& m);
    void f64_vec(const std::vector<double>& v);

  private:
    void raw(const void* p, std::size_t n);
    std::ofstream out_;
    std::string path_;
};

class BinaryReader {
  public:
    explicit BinaryReader(const std::string& path);

    void expect_magic(const char tag[8]);
    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    double f64();
    std::string str();
    Matrix matrix();
    std::vector<double> f64_vec();

  private:
    void raw(void* p, std::size_t n);
    std::ifstream in_;
    std::string path_;
};

// Reads just the first 8 bytes; false on short or unreadable files.
bool file_has_magic(const std::string& path, const char tag[8]);

}  // namespace tfad
