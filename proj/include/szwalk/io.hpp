#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace szwalk::io {

// printf %.{sig}g formatting; deterministic for a given libc.
std::string fmt_sig(double v, int sig);

inline constexpr int kJsonSigDigits = 17;  // round-trip fidelity
inline constexpr int kCsvSigDigits = 12;   // readability

// Minimal streaming JSON writer. Numbers are emitted with 17 significant
// digits; non-finite doubles become null.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& os) : os_(os) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view k);
  JsonWriter& value(double v);
  JsonWriter& value(long long v);
  JsonWriter& value(int v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(long v) { return value(static_cast<long long>(v)); }
  JsonWriter& value(unsigned long long v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }
  JsonWriter& null();

 private:
  void separate();
  void write_string(std::string_view s);

  std::ostream& os_;
  std::vector<int> counts_;  // element counts per open scope
  bool after_key_ = false;
};

}  // namespace szwalk::io
