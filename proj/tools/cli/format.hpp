#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace cli {

std::string fmt(double v);
std::string fmt(const std::optional<double>& v);  // empty when absent
std::string join(const std::vector<double>& v, char sep = ',');
std::string join(const std::vector<int>& v, char sep = ',');

/// "# lamellar <version> command=<cmd> key=value ..."
std::string comment_line(const std::string& command, const ParamList& params);

class Csv {
 public:
  Csv(const std::string& command, const ParamList& params, std::vector<std::string> header);
  void row(const std::vector<std::string>& fields);
  const std::string& text() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Minimal streaming JSON writer with 17-digit numbers.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& array(const std::vector<double>& v);
  std::string str() const { return out_ + "\n"; }

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_;
  bool after_key_ = false;
};

/// Writes to `path`, or stdout when empty.
void emit(const std::optional<std::string>& path, const std::string& text);

}  // namespace cli
