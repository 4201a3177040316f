#include "mover/text.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mover/error.hpp"

namespace mover::text {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::IoError, "read failed for " + path.string());
  }
  return buffer.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".mover-tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw Error(ErrorCode::IoError, "short write to " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::IoError, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> split_identifier(std::string_view identifier) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      words.push_back(to_lower(current));
      current.clear();
    }
  };
  for (std::size_t i = 0; i < identifier.size(); ++i) {
    char c = identifier[i];
    if (!is_alnum(c)) {
      flush();
      continue;
    }
    if (!current.empty()) {
      char prev = current.back();
      bool boundary = false;
      if (is_upper(c) && (is_lower(prev) || is_digit(prev))) {
        boundary = true;
      } else if (is_upper(c) && is_upper(prev) && i + 1 < identifier.size() &&
                 is_lower(identifier[i + 1])) {
        // tail of an acronym: "HTTPServer" -> "http" | "server"
        boundary = true;
      } else if (is_digit(c) != is_digit(prev)) {
        boundary = true;
      }
      if (boundary) {
        flush();
      }
    }
    current.push_back(c);
  }
  flush();
  return words;
}

std::string base_type_name(std::string_view type_text) {
  std::string out;
  int depth = 0;
  for (char c : type_text) {
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      --depth;
    } else if (depth == 0 && !std::isspace(static_cast<unsigned char>(c)) && c != '[' &&
               c != ']') {
      out.push_back(c);
    }
  }
  while (ends_with(out, ".")) {
    out.pop_back();  // varargs dots
  }
  return out;
}

std::string erase_type(std::string_view type_text) {
  std::string stripped;
  int depth = 0;
  int dims = 0;
  std::string_view rest = type_text;
  // drop annotations and `final`
  std::string cleaned;
  {
    std::size_t i = 0;
    while (i < rest.size()) {
      if (rest[i] == '@') {
        ++i;
        while (i < rest.size() && (is_alnum(rest[i]) || rest[i] == '_' || rest[i] == '.' || rest[i] == '$')) {
          ++i;
        }
        if (i < rest.size() && rest[i] == '(') {
          int paren = 0;
          for (; i < rest.size(); ++i) {
            if (rest[i] == '(') ++paren;
            if (rest[i] == ')' && --paren == 0) {
              ++i;
              break;
            }
          }
        }
        continue;
      }
      cleaned.push_back(rest[i]);
      ++i;
    }
  }
  std::string_view view = cleaned;
  if (starts_with(trim(view), "final ")) {
    cleaned = trim(view).substr(6);
    view = cleaned;
  }
  for (std::size_t i = 0; i < view.size(); ++i) {
    char c = view[i];
    if (c == '<') {
      ++depth;
    } else if (c == '>') {
      --depth;
    } else if (depth > 0) {
      continue;
    } else if (c == '[') {
      ++dims;
    } else if (c == '.' && i + 2 < view.size() && view[i + 1] == '.' && view[i + 2] == '.') {
      ++dims;
      i += 2;
    } else if (c != ']' && !std::isspace(static_cast<unsigned char>(c))) {
      stripped.push_back(c);
    }
  }
  auto dot = stripped.rfind('.');
  std::string simple = dot == std::string::npos ? stripped : stripped.substr(dot + 1);
  for (int d = 0; d < dims; ++d) {
    simple += "[]";
  }
  return simple;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::size_t line_start(std::string_view s, std::size_t offset) {
  if (offset == 0) return 0;
  auto pos = s.rfind('\n', offset - 1);
  return pos == std::string_view::npos ? 0 : pos + 1;
}

std::size_t line_end_inclusive(std::string_view s, std::size_t offset) {
  auto pos = s.find('\n', offset);
  return pos == std::string_view::npos ? s.size() : pos + 1;
}

std::string_view detect_newline(std::string_view content) {
  auto pos = content.find('\n');
  if (pos != std::string_view::npos && pos > 0 && content[pos - 1] == '\r') {
    return "\r\n";
  }
  return "\n";
}

}  // namespace mover::text
