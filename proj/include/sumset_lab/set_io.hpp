#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "sumset_lab/tensor_set.hpp"

namespace sumset_lab {

// Text set files:
//
//   alphabet <|X|>
//   n <n>
//   indices            one decimal point index per following line, ascending
// or
//   hexbits            one line of ceil(|X|^n / 4) lowercase hex digits; digit j
//                      holds indices 4j..4j+3 with index 4j+k at bit value 2^k

enum class SetEncoding { automatic, indices, hexbits };

inline std::string write_set(const TensorSet& e, SetEncoding encoding = SetEncoding::automatic) {
  const std::size_t hex_len = static_cast<std::size_t>((e.points() + 3) / 4);
  if (encoding == SetEncoding::automatic) {
    const std::size_t digits = std::to_string(e.points() - 1).size() + 1;
    encoding = e.count() * digits <= hex_len ? SetEncoding::indices : SetEncoding::hexbits;
  }
  std::ostringstream os;
  os << "alphabet " << e.alphabet() << "\n" << "n " << e.dimension() << "\n";
  if (encoding == SetEncoding::indices) {
    os << "indices\n";
    e.bits().for_each_set([&](std::size_t i) { os << i << "\n"; });
  } else {
    os << "hexbits\n";
    std::string hex(hex_len, '0');
    static constexpr char kDigits[] = "0123456789abcdef";
    for (std::size_t j = 0; j < hex_len; ++j) {
      unsigned nibble = 0;
      for (unsigned k = 0; k < 4; ++k) {
        const std::size_t i = 4 * j + k;
        if (i < e.points() && e.contains(i)) nibble |= 1u << k;
      }
      hex[j] = kDigits[nibble];
    }
    os << hex << "\n";
  }
  return os.str();
}

inline TensorSet read_set(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto bad = [](const std::string& why) { fail(ErrorKind::invalid_input, "set file: " + why); };
  std::string key;
  long long alphabet = 0, n = -1;
  if (!(in >> key >> alphabet) || key != "alphabet") bad("expected 'alphabet <size>' on line 1");
  if (!(in >> key >> n) || key != "n") bad("expected 'n <dimension>' on line 2");
  if (alphabet < 1 || alphabet > (1LL << 30)) bad("alphabet size out of range");
  if (n < 1) bad("n must be at least 1");
  TensorSet e(static_cast<std::uint32_t>(alphabet), static_cast<std::size_t>(n));
  std::string mode;
  if (!(in >> mode)) bad("missing 'indices' or 'hexbits' section");
  if (mode == "indices") {
    std::string token;
    while (in >> token) {
      if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) bad("bad index '" + token + "'");
      if (token.size() > 19) bad("index out of range: " + token);
      const PointIndex i = std::stoull(token);
      if (i >= e.points()) bad("index out of range: " + token);
      if (e.contains(i)) bad("duplicate index " + token);
      e.insert(i);
    }
  } else if (mode == "hexbits") {
    std::string hex, chunk;
    while (in >> chunk) hex += chunk;
    const std::size_t expected = static_cast<std::size_t>((e.points() + 3) / 4);
    if (hex.size() != expected)
      bad("hexbits length " + std::to_string(hex.size()) + " != expected " + std::to_string(expected));
    for (std::size_t j = 0; j < hex.size(); ++j) {
      const char c = hex[j];
      unsigned nibble;
      if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A' + 10);
      else bad(std::string("bad hex digit '") + c + "'");
      for (unsigned k = 0; k < 4; ++k) {
        if (!(nibble >> k & 1u)) continue;
        const std::size_t i = 4 * j + k;
        if (i >= e.points()) bad("padding bits must be zero");
        e.insert(i);
      }
    }
  } else {
    bad("unknown section '" + mode + "'");
  }
  return e;
}

inline TensorSet read_set_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::invalid_input, "cannot open set file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_set(buf.str());
}

inline void write_set_file(const std::string& path, const TensorSet& e, SetEncoding encoding = SetEncoding::automatic) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::invalid_input, "cannot write set file '" + path + "'");
  out << write_set(e, encoding);
}

}  // namespace sumset_lab
