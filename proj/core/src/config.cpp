#include "weaknet/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace weaknet {

namespace {

std::string strip(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text, const std::string& origin) {
  ConfigMap config;
  std::istringstream stream(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string trimmed = strip(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (trimmed.front() == '[') {
      if (trimmed.back() != ']') {
        throw input_error(origin + ":" + std::to_string(line_no) + ": unterminated section header");
      }
      section = strip(trimmed.substr(1, trimmed.size() - 2));
      if (!valid_key(section)) {
        throw input_error(origin + ":" + std::to_string(line_no) + ": bad section name '" +
                          section + "'");
      }
      continue;
    }
    const auto equals = trimmed.find('=');
    if (equals == std::string::npos) {
      throw input_error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = strip(trimmed.substr(0, equals));
    if (!valid_key(key)) {
      throw input_error(origin + ":" + std::to_string(line_no) + ": bad key '" + key + "'");
    }
    std::string value = strip(trimmed.substr(equals + 1));
    if (value.empty()) {
      throw input_error(origin + ":" + std::to_string(line_no) + ": empty value for '" + key +
                        "'");
    }
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw input_error(origin + ":" + std::to_string(line_no) + ": unterminated string");
      }
      value = value.substr(1, value.size() - 2);
    } else {
      // Strip trailing comments from bare values.
      const auto hash = value.find('#');
      if (hash != std::string::npos) value = strip(value.substr(0, hash));
    }
    const std::string full_key = section.empty() ? key : section + "." + key;
    if (config.has(full_key)) {
      throw input_error(origin + ":" + std::to_string(line_no) + ": duplicate key '" + full_key +
                        "'");
    }
    config.values_[full_key] = value;
  }
  return config;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw input_error("cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

std::optional<std::string> ConfigMap::get_string(const std::string& key) const {
  const auto found = values_.find(key);
  if (found == values_.end()) return std::nullopt;
  return found->second;
}

std::optional<Scalar> ConfigMap::get_scalar(const std::string& key) const {
  const auto found = values_.find(key);
  if (found == values_.end()) return std::nullopt;
  const char* begin = found->second.c_str();
  char* end = nullptr;
  const Scalar value = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw input_error("config key '" + key + "' is not a number: '" + found->second + "'");
  }
  return value;
}

std::optional<long long> ConfigMap::get_int(const std::string& key) const {
  const auto found = values_.find(key);
  if (found == values_.end()) return std::nullopt;
  try {
    std::size_t used = 0;
    const long long value = std::stoll(found->second, &used);
    if (used != found->second.size()) throw std::invalid_argument("trailing text");
    return value;
  } catch (const std::exception&) {
    throw input_error("config key '" + key + "' is not an integer: '" + found->second + "'");
  }
}

std::optional<bool> ConfigMap::get_bool(const std::string& key) const {
  const auto found = values_.find(key);
  if (found == values_.end()) return std::nullopt;
  if (found->second == "true") return true;
  if (found->second == "false") return false;
  throw input_error("config key '" + key + "' is not a boolean: '" + found->second + "'");
}

std::vector<std::string> ConfigMap::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back(key);
  return out;
}

}  // namespace weaknet
