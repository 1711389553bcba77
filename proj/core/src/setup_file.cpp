#include "pairstat/setup_file.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string_view>

#include "pairstat/error.hpp"

namespace pairstat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double>* field(SetupConfig& cfg, std::string_view key) {
  if (key == "eta_h") return &cfg.eta_h;
  if (key == "eta_a") return &cfg.eta_a;
  if (key == "eta_b") return &cfg.eta_b;
  if (key == "d_h") return &cfg.d_h;
  if (key == "d_a") return &cfg.d_a;
  if (key == "d_b") return &cfg.d_b;
  if (key == "c") return &cfg.c;
  return nullptr;
}

}  // namespace

void SetupConfig::apply(const SetupConfig& o) {
  for (auto [dst, src] :
       {std::pair{&eta_h, &o.eta_h}, std::pair{&eta_a, &o.eta_a},
        std::pair{&eta_b, &o.eta_b}, std::pair{&d_h, &o.d_h},
        std::pair{&d_a, &o.d_a}, std::pair{&d_b, &o.d_b},
        std::pair{&c, &o.c}}) {
    if (*src) *dst = *src;
  }
}

DarkCountRates SetupConfig::darks() const {
  return {d_h.value_or(0.0), d_a.value_or(0.0), d_b.value_or(0.0)};
}

SetupModel SetupConfig::model() const {
  if (!eta_h || !eta_a || !eta_b) {
    throw InvalidArgument("setup needs eta_h, eta_a and eta_b");
  }
  return SetupModel(ChannelTransmissions(*eta_h, *eta_a, *eta_b), darks(),
                    c.value_or(1.0));
}

SetupConfig read_setup_config(std::istream& in, const std::string& source) {
  SetupConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected key = value");
    }
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    auto* slot = field(cfg, key);
    if (!slot) {
      throw ParseError(source, line_no,
                       "unknown setup key '" + std::string(key) + "'");
    }
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() ||
        !std::isfinite(v)) {
      throw ParseError(source, line_no,
                       "value of '" + std::string(key) + "' is not a number");
    }
    *slot = v;
  }
  if (in.bad()) throw ParseError(source, 0, "read error");
  return cfg;
}

SetupConfig read_setup_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return read_setup_config(in, path.string());
}

std::string format_setup(const SetupModel& setup) {
  std::ostringstream out;
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", key, v);
    out << buf;
  };
  put("eta_h", setup.transmissions().eta_h());
  put("eta_a", setup.transmissions().eta_a());
  put("eta_b", setup.transmissions().eta_b());
  put("d_h", setup.darks().d_h());
  put("d_a", setup.darks().d_a());
  put("d_b", setup.darks().d_b());
  put("c", setup.c());
  return out.str();
}

}  // namespace pairstat
