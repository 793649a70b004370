#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "kaclab/kac_process.hpp"
#include "kaclab/version.hpp"

#include <json.hpp>

namespace kaclab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cell_name(int r, int t, bool csv) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "r%05d_t%03d.%s", r, t, csv ? "csv" : "bin");
  return buf;
}

json kernel_to_json(const CollisionKernel& k) {
  json j;
  j["model"] = to_string(k.model);
  j["angular_mass"] = to_string(k.convention);
  if (k.model == CrossSection::TrueMaxwellTruncated) {
    j["eps"] = k.eps;
    j["nu"] = k.nu;
  }
  return j;
}

CollisionKernel kernel_from_json(const json& j) {
  CollisionKernel k;
  std::string m = j.at("model").get<std::string>();
  if (m == "maxwell_cutoff")
    k.model = CrossSection::MaxwellCutoff;
  else if (m == "true_maxwell_truncated")
    k.model = CrossSection::TrueMaxwellTruncated;
  else if (m == "hard_spheres")
    k.model = CrossSection::HardSpheres;
  else
    throw std::runtime_error("ensemble manifest: unknown kernel model " + m);
  k.convention = j.at("angular_mass").get<std::string>() == "normalized"
                     ? AngularMass::Normalized
                     : AngularMass::RawSolidAngle;
  if (j.contains("eps")) k.eps = j["eps"].get<double>();
  if (j.contains("nu")) k.nu = j["nu"].get<double>();
  return k;
}

}  // namespace

void save_ensemble(const Ensemble& e, const std::string& dir, bool csv) {
  fs::create_directories(dir);
  json man;
  man["format"] = "kaclab-ensemble";
  man["format_version"] = 1;
  man["code_version"] = kVersion;
  man["N"] = e.N;
  man["d"] = e.d;
  man["R"] = e.R;
  man["grid"] = e.grid;
  man["kernel"] = kernel_to_json(e.kernel);
  man["scheme"] = to_string(e.scheme);
  man["base_seed"] = e.base_seed;
  man["seeds"] = e.seeds;
  man["layout"] = csv ? "csv rows v_i, columns components"
                      : "raw little-endian float64, row-major N x d";
  man["storage"] = csv ? "csv" : "bin";
  std::vector<bool> frozen(e.frozen.begin(), e.frozen.end());
  man["frozen"] = frozen;
  man["collision_counts"] = e.collision_counts;

  std::ofstream mf(fs::path(dir) / "manifest.json");
  mf << man.dump(2) << "\n";
  mf.close();

  for (int r = 0; r < e.R; ++r)
    for (std::size_t t = 0; t < e.grid.size(); ++t) {
      fs::path p = fs::path(dir) / cell_name(r, static_cast<int>(t), csv);
      const auto& mat = e.data[r][t];
      if (csv) {
        std::ofstream f(p);
        f.precision(17);
        for (int i = 0; i < e.N; ++i) {
          for (int k = 0; k < e.d; ++k) {
            if (k) f << ',';
            f << mat[static_cast<std::size_t>(i) * e.d + k];
          }
          f << '\n';
        }
      } else {
        std::ofstream f(p, std::ios::binary);
        f.write(reinterpret_cast<const char*>(mat.data()),
                static_cast<std::streamsize>(mat.size() * sizeof(double)));
      }
    }
}

Ensemble load_ensemble(const std::string& dir) {
  std::ifstream mf(fs::path(dir) / "manifest.json");
  if (!mf) throw std::runtime_error("load_ensemble: missing manifest in " + dir);
  json man = json::parse(mf);
  if (man.at("format").get<std::string>() != "kaclab-ensemble")
    throw std::runtime_error("load_ensemble: not an ensemble directory");

  Ensemble e;
  e.N = man.at("N").get<int>();
  e.d = man.at("d").get<int>();
  e.R = man.at("R").get<int>();
  e.grid = man.at("grid").get<std::vector<double>>();
  e.kernel = kernel_from_json(man.at("kernel"));
  e.scheme = man.at("scheme").get<std::string>() == "ssa" ? Scheme::SSA : Scheme::Rejection;
  e.base_seed = man.at("base_seed").get<std::uint64_t>();
  e.seeds = man.at("seeds").get<std::vector<std::uint64_t>>();
  e.collision_counts = man.at("collision_counts").get<std::vector<std::uint64_t>>();
  auto frozen = man.at("frozen").get<std::vector<bool>>();
  e.frozen.assign(frozen.begin(), frozen.end());
  bool csv = man.at("storage").get<std::string>() == "csv";

  std::size_t cell = static_cast<std::size_t>(e.N) * e.d;
  e.data.assign(e.R, std::vector<std::vector<double>>(e.grid.size()));
  for (int r = 0; r < e.R; ++r)
    for (std::size_t t = 0; t < e.grid.size(); ++t) {
      fs::path p = fs::path(dir) / cell_name(r, static_cast<int>(t), csv);
      auto& mat = e.data[r][t];
      mat.resize(cell);
      if (csv) {
        std::ifstream f(p);
        std::string line;
        std::size_t i = 0;
        while (std::getline(f, line) && i < cell) {
          std::size_t pos = 0;
          while (pos < line.size() && i < cell) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            mat[i++] = std::stod(line.substr(pos, next - pos));
            pos = next + 1;
          }
        }
        if (i != cell) throw std::runtime_error("load_ensemble: bad csv " + p.string());
      } else {
        std::ifstream f(p, std::ios::binary);
        f.read(reinterpret_cast<char*>(mat.data()),
               static_cast<std::streamsize>(cell * sizeof(double)));
        if (f.gcount() != static_cast<std::streamsize>(cell * sizeof(double)))
          throw std::runtime_error("load_ensemble: truncated " + p.string());
      }
    }
  return e;
}

}  // namespace kaclab
