#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace chermnykh {

// %.16e: 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

// Streaming JSON writer that emits keys in insertion order. The standard
// shortest-round-trip dump would vary digit counts between values; files here
// pin every number to the same width instead.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(double v);
  JsonWriter& value(long v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& null();
  std::string take();

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_;  // per open container
  bool after_key_ = false;
};

std::string json_escape(const std::string& s);

// Writes through a temp file in the same directory, then renames over the
// target, creating parent directories as needed.
void atomic_write(const std::string& path, const std::string& content);

uint64_t fnv1a64(const std::string& bytes, uint64_t seed = 14695981039346656037ull);
std::string hash_hex(uint64_t h);

}  // namespace chermnykh
