#include "flutter/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include <openssl/evp.h>

#include "flutter/errors.hpp"

namespace flutter {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

RunOutputs::RunOutputs(std::filesystem::path directory, std::string prefix)
    : dir_(std::move(directory)), prefix_(std::move(prefix)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw IoError("cannot create output directory '" + dir_.string() + "'" +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

std::filesystem::path RunOutputs::write(const std::string& name, const std::string& content) {
  const auto path = dir_ / (prefix_ + name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), std::streamsize(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
  files_.push_back({{"path", prefix_ + name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  return path;
}

std::string flutter_mask_csv(const FlutterMask& mask) {
  std::ostringstream os;
  os << "H_over_mu,theta_n_deg,flutter\n";
  if (mask.empty()) return os.str();
  for (int i = 0; i < mask.H_axis.steps; ++i) {
    for (int j = 0; j < mask.theta_axis.steps; ++j) {
      os << format_number(mask.H_axis.at(i)) << ',' << format_number(mask.theta_axis.at(j)) << ','
         << (mask.at(i, j) ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

std::string profile_csv(const std::vector<ProfileSample>& profile) {
  std::ostringstream os;
  os << "r_over_a,re_G11,im_G11,re_G12,im_G12,re_G21,im_G21,re_G22,im_G22\n";
  for (const auto& s : profile) {
    os << format_number(s.r);
    for (const auto& [i, j] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}}) {
      os << ',' << format_number(s.g(i, j).real()) << ',' << format_number(s.g(i, j).imag());
    }
    os << '\n';
  }
  return os.str();
}

std::string field_csv(const FieldMap& map) {
  std::ostringstream os;
  os << "x1_over_a,x2_over_a,re_u1,im_u1,re_u2,im_u2\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < map.grid.n2; ++j) {
    for (int i = 0; i < map.grid.n1; ++i) {
      const std::size_t c = map.index(i, j);
      const bool m = map.masked[c];
      os << format_number(map.grid.x1(i)) << ',' << format_number(map.grid.x2(j)) << ','
         << format_number(m ? nan : map.u[c](0).real()) << ','
         << format_number(m ? nan : map.u[c](0).imag()) << ','
         << format_number(m ? nan : map.u[c](1).real()) << ','
         << format_number(m ? nan : map.u[c](1).imag()) << '\n';
    }
  }
  return os.str();
}

std::vector<double> field_scalar(const FieldMap& map, const std::string& name) {
  std::vector<double> out(map.u.size());
  for (std::size_t c = 0; c < out.size(); ++c) {
    const Vec2c& u = map.u[c];
    double v = 0.0;
    if (name == "re_u1") v = u(0).real();
    else if (name == "im_u1") v = u(0).imag();
    else if (name == "re_u2") v = u(1).real();
    else if (name == "im_u2") v = u(1).imag();
    else if (name == "abs_u1") v = std::abs(u(0));
    else if (name == "abs_u2") v = std::abs(u(1));
    else if (name == "abs_u") v = u.norm();
    else throw std::invalid_argument("unknown field scalar '" + name + "'");
    out[c] = map.masked[c] ? std::numeric_limits<double>::quiet_NaN() : v;
  }
  return out;
}

PgmImage field_pgm(const FieldMap& map, const std::vector<double>& scalar) {
  PgmImage img;
  img.min = std::numeric_limits<double>::infinity();
  img.max = -std::numeric_limits<double>::infinity();
  for (const double v : scalar) {
    if (!std::isfinite(v)) continue;
    img.min = std::min(img.min, v);
    img.max = std::max(img.max, v);
  }
  if (!(img.min <= img.max)) img.min = img.max = 0.0;
  const double span = img.max - img.min;
  std::ostringstream os;
  os << "P5\n" << map.grid.n1 << ' ' << map.grid.n2 << "\n255\n";
  std::string body(std::size_t(map.grid.n1) * map.grid.n2, '\0');
  for (int j = 0; j < map.grid.n2; ++j) {
    const int row = map.grid.n2 - 1 - j;
    for (int i = 0; i < map.grid.n1; ++i) {
      const double v = scalar[map.index(i, j)];
      unsigned char px = 0;
      if (std::isfinite(v) && span > 0.0) {
        px = static_cast<unsigned char>(std::lround(255.0 * (v - img.min) / span));
      }
      body[std::size_t(row) * map.grid.n1 + i] = static_cast<char>(px);
    }
  }
  img.bytes = os.str() + body;
  return img;
}

std::string pgm_sidecar(const std::string& scalar, const PgmImage& img) {
  return "scalar=" + scalar + "\nmin=" + format_number(img.min) + "\nmax=" + format_number(img.max) +
         "\n";
}

}  // namespace flutter
