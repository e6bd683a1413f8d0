#include "fairlens/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "../byte_io.hpp"
#include "CLI11.hpp"
#include "fairlens/amap.hpp"
#include "fairlens/colormap.hpp"
#include "fairlens/error.hpp"
#include "fairlens/fairness.hpp"
#include "fairlens/group_stats.hpp"
#include "fairlens/manifest.hpp"
#include "fairlens/model.hpp"
#include "fairlens/parallel.hpp"
#include "fairlens/png_io.hpp"
#include "fairlens/render.hpp"
#include "fairlens/score_cam.hpp"
#include "fairlens/scores_csv.hpp"
#include "fairlens/selftest.hpp"
#include "json.hpp"

namespace fairlens {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct CamArgs {
  std::string model;
  std::string images;
  std::string list;
  std::string out;
  std::string ethnicity = "unknown";
  std::string gender = "unknown";
  bool skip_bad = false;
  std::size_t threads = 0;
};

struct ManifestArgs {
  std::string manifest;
  std::string out;
  std::size_t threads = 0;
  double alpha = kDefaultAlpha;
  std::vector<double> targets = kDefaultTargets;
  std::string colormap{kDefaultColormap};
  std::size_t bins = kDefaultHistogramBins;
  double overlay_alpha = 0.5;
};

// Writes, then reads back and compares, so a reported artifact is known good.
class OutputDir {
 public:
  OutputDir(const CohortManifest& m, const std::string& override_dir)
      : root_(resolve_output_dir(m, override_dir.empty() ? std::nullopt
                                                          : std::optional<std::string>(override_dir))),
        prefix_(m.dataset + "_" + m.model + "_") {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + root_);
  }

  std::string name(const std::string& panel, const std::string& groups,
                   const std::string& ext) const {
    return prefix_ + panel + "_" + groups + "." + ext;
  }
  std::string path(const std::string& file) const { return (fs::path(root_) / file).string(); }
  const std::string& root() const { return root_; }

  void write(const std::string& file, std::span<const std::uint8_t> bytes) {
    const std::string p = path(file);
    detail::write_file_bytes(p, bytes);
    const auto back = detail::read_file_bytes(p);
    if (!std::equal(back.begin(), back.end(), bytes.begin(), bytes.end())) {
      throw Error(ErrorCode::kIo, "verification of " + p + " failed");
    }
    written_.push_back(file);
  }
  void write(const std::string& file, const std::string& text) {
    write(file, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  void write_maps(const std::string& file, std::span<const ActivationMap> maps) {
    write(file, encode_amap(maps));
    if (read_amap_file(path(file)).size() != maps.size()) {
      throw Error(ErrorCode::kIo, "verification of " + path(file) + " failed");
    }
  }
  const std::vector<std::string>& written() const { return written_; }

 private:
  std::string root_;
  std::string prefix_;
  std::vector<std::string> written_;
};

Demographics demographics_of(const CohortFilter& f) {
  return {f.ethnicity.value_or(Ethnicity::kUnknown), f.gender.value_or(Gender::kUnknown)};
}

Ethnicity ethnicity_arg(const std::string& s) {
  if (s.empty() || s == "unknown") return Ethnicity::kUnknown;
  if (auto e = parse_ethnicity(s)) return *e;
  throw Error(ErrorCode::kInvalidArgument, "unknown ethnicity tag '" + s + "'");
}

Gender gender_arg(const std::string& s) {
  if (s.empty() || s == "unknown") return Gender::kUnknown;
  if (auto g = parse_gender(s)) return *g;
  throw Error(ErrorCode::kInvalidArgument, "unknown gender tag '" + s + "'");
}

struct ImageEntry {
  std::string path;
  Demographics who;
};

std::vector<ImageEntry> images_from_dir(const CamArgs& a) {
  if (!fs::is_directory(a.images)) {
    throw Error(ErrorCode::kIo, "image directory not found: " + a.images);
  }
  const Demographics who{ethnicity_arg(a.ethnicity), gender_arg(a.gender)};
  std::vector<ImageEntry> out;
  for (const auto& entry : fs::directory_iterator(a.images)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (ext == ".png") out.push_back({entry.path().string(), who});
  }
  std::sort(out.begin(), out.end(),
            [](const ImageEntry& x, const ImageEntry& y) { return x.path < y.path; });
  return out;
}

std::vector<ImageEntry> images_from_list(const std::string& list_path) {
  std::ifstream in(list_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open image list " + list_path);
  const fs::path base = fs::path(list_path).parent_path();
  std::vector<ImageEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "path,ethnicity,gender") {
        throw Error(ErrorCode::kMalformedInput,
                    list_path + ": line 1: expected header 'path,ethnicity,gender'");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    if (line.back() == ',') cols.emplace_back();
    if (cols.size() != 3) {
      throw Error(ErrorCode::kMalformedInput,
                  list_path + ": line " + std::to_string(line_no) + ": expected 3 columns");
    }
    try {
      fs::path p(cols[0]);
      if (p.is_relative()) p = base / p;
      out.push_back({p.string(), {ethnicity_arg(cols[1]), gender_arg(cols[2])}});
    } catch (const Error& e) {
      throw Error(e.code(), list_path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (line_no == 0) throw Error(ErrorCode::kMalformedInput, list_path + ": empty image list");
  return out;
}

int cmd_cam(const CamArgs& a, std::ostream& out, std::ostream& err) {
  const ToyModelSpec spec = load_model_file(a.model);
  const auto entries = a.images.empty() ? images_from_list(a.list) : images_from_dir(a);
  std::vector<FaceSample> samples;
  std::size_t skipped = 0;
  for (const auto& e : entries) {
    try {
      samples.push_back({fs::path(e.path).stem().string(), load_face_image(e.path), e.who});
    } catch (const Error& ex) {
      if (!a.skip_bad) throw;
      ++skipped;
      err << "cam: skipping " << ex.what() << '\n';
    }
  }
  if (samples.empty()) throw Error(ErrorCode::kInvalidArgument, "cam: no usable images");
  out << "cam: computing " << samples.size() << " activation maps\n";
  const auto maps = score_cam_batch(spec, samples, a.threads);
  const fs::path dest(a.out);
  if (dest.has_parent_path()) fs::create_directories(dest.parent_path());
  write_amap_file(maps, a.out);
  if (read_amap_file(a.out).size() != maps.size()) {
    throw Error(ErrorCode::kIo, "verification of " + a.out + " failed");
  }
  out << "cam: wrote " << maps.size() << " maps to " << a.out;
  if (skipped > 0) out << " (" << skipped << " skipped)";
  out << '\n';
  return 0;
}

std::vector<Cohort> load_cohorts(const CohortManifest& m) {
  std::map<std::string, std::vector<ActivationMap>> archives;
  std::vector<Cohort> cohorts;
  for (const auto& def : m.cohorts) {
    auto it = archives.find(def.archive);
    if (it == archives.end()) it = archives.emplace(def.archive, read_amap_file(def.archive)).first;
    Cohort c{def.label, {}};
    for (const auto& map : it->second) {
      if (def.filter.matches(map.demographics)) c.maps.push_back(map);
    }
    if (c.size() < kMinCohortSize) {
      throw Error(ErrorCode::kCohortTooSmall,
                  "cohort '" + def.label + "' has " + std::to_string(c.size()) +
                      " activation map(s); at least " + std::to_string(kMinCohortSize) +
                      " are required");
    }
    cohorts.push_back(std::move(c));
  }
  return cohorts;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json range_json(const Grid& g) { return Json{{"min", min_value(g)}, {"max", max_value(g)}}; }

int cmd_stats(const ManifestArgs& a, std::ostream& out, std::ostream& err) {
  const CohortManifest m = load_manifest(a.manifest);
  OutputDir dir(m, a.out);
  const auto cohorts = load_cohorts(m);
  std::vector<CohortStatistics> stats(cohorts.size());
  parallel_for(cohorts.size(), a.threads,
               [&](std::size_t i) { stats[i] = compute_statistics(cohorts[i]); });

  Json summary{{"dataset", m.dataset}, {"model", m.model}, {"reference", m.reference}};
  Json cohort_json = Json::array();
  const CohortStatistics* ref = nullptr;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    const Demographics who = demographics_of(m.cohorts[i].filter);
    const std::string mam_file = dir.name("mam", s.label, "amap");
    const std::string amv_file = dir.name("amv", s.label, "amap");
    dir.write_maps(mam_file, std::vector<ActivationMap>{{"mam_" + s.label, s.mam, who}});
    dir.write_maps(amv_file, std::vector<ActivationMap>{{"amv_" + s.label, s.amv, who}});
    cohort_json.push_back({{"label", s.label},
                           {"count", s.count},
                           {"mam", range_json(s.mam)},
                           {"amv", range_json(s.amv)},
                           {"files", {mam_file, amv_file}}});
    if (s.label == m.reference) ref = &s;
    out << "stats: cohort " << s.label << " N=" << s.count << '\n';
  }
  summary["cohorts"] = cohort_json;

  Json comparisons = Json::array();
  const SpatialProfile ref_profile = compute_spatial_profile(ref->amv, ref->label);
  for (const auto& s : stats) {
    if (&s == ref) continue;
    const std::string groups = s.label + "-" + ref->label;
    const Grid damv = compute_damv(s, *ref);
    const std::string damv_file = dir.name("damv", groups, "amap");
    dir.write_maps(damv_file, std::vector<ActivationMap>{{"damv_" + groups, damv, {}}});
    const SpatialProfile prof = compute_spatial_profile(s.amv, s.label);
    std::string csv = "axis,index," + ref->label + "," + s.label + "\n";
    for (std::size_t k = 0; k < prof.s_x.size(); ++k) {
      csv += "s_x," + std::to_string(k) + "," + exact(ref_profile.s_x[k]) + "," +
             exact(prof.s_x[k]) + "\n";
    }
    for (std::size_t k = 0; k < prof.s_y.size(); ++k) {
      csv += "s_y," + std::to_string(k) + "," + exact(ref_profile.s_y[k]) + "," +
             exact(prof.s_y[k]) + "\n";
    }
    const std::string profile_file = dir.name("profiles", groups, "csv");
    dir.write(profile_file, csv);
    comparisons.push_back({{"label", s.label},
                           {"reference", ref->label},
                           {"damv", range_json(damv)},
                           {"files", {damv_file, profile_file}}});
  }
  summary["comparisons"] = comparisons;
  if (stats.size() == 1) {
    err << "stats: warning: manifest has only the reference cohort; no D-AM-V computed\n";
    summary["warnings"] = Json::array({"reference-only manifest: no D-AM-V computed"});
  }
  dir.write(dir.name("stats", "all", "json"), summary.dump(2) + "\n");
  out << "stats: wrote " << dir.written().size() << " files to " << dir.root() << '\n';
  return 0;
}

Json report_json(const FairnessReport& r, std::span<const std::string> groups) {
  Json curve = Json::array();
  for (const auto& p : r.curve) {
    Json rates = Json::object();
    for (const auto& [g, gr] : p.rates) rates[g] = {{"fmr", gr.fmr}, {"fnmr", gr.fnmr}};
    curve.push_back({{"target_fmr", p.target_fmr},
                     {"tau", p.tau},
                     {"achieved_fmr", p.achieved_fmr},
                     {"rates", rates},
                     {"a_tau", p.a_tau},
                     {"b_tau", p.b_tau},
                     {"fdr", p.fdr}});
  }
  return Json{{"alpha", r.alpha},
              {"epsilon", r.epsilon},
              {"groups", std::vector<std::string>(groups.begin(), groups.end())},
              {"curve", curve},
              {"fdr_auc", r.fdr_auc}};
}

FairnessReport report_from_json(const Json& j) {
  FairnessReport r;
  r.alpha = j.at("alpha").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.fdr_auc = j.at("fdr_auc").get<double>();
  for (const auto& p : j.at("curve")) {
    FdrPoint pt;
    pt.target_fmr = p.at("target_fmr").get<double>();
    pt.tau = p.at("tau").get<double>();
    pt.achieved_fmr = p.at("achieved_fmr").get<double>();
    pt.a_tau = p.at("a_tau").get<double>();
    pt.b_tau = p.at("b_tau").get<double>();
    pt.fdr = p.at("fdr").get<double>();
    for (const auto& [g, gr] : p.at("rates").items()) {
      pt.rates[g] = {gr.at("fmr").get<double>(), gr.at("fnmr").get<double>()};
    }
    r.curve.push_back(std::move(pt));
  }
  return r;
}

void write_plot(OutputDir& dir, const std::string& panel, const std::string& groups,
                const PlotOutput& plot) {
  dir.write(dir.name(panel, groups, "svg"), plot.svg);
  dir.write(dir.name(panel, groups, "csv"), plot.csv);
}

int cmd_fairness(const ManifestArgs& a, std::ostream& out, std::ostream&) {
  const CohortManifest m = load_manifest(a.manifest);
  if (!m.scores) {
    throw Error(ErrorCode::kMissingPrerequisite,
                "manifest " + a.manifest + " has no \"scores\" entry; fairness needs a "
                "comparison-score CSV (pair_id,group,kind,score)");
  }
  OutputDir dir(m, a.out);
  const ComparisonScoreSet scores = read_scores_csv_file(*m.scores);
  const auto groups = scores.groups();
  const FairnessReport report = fdr_curve(scores, groups, a.targets, a.alpha);
  dir.write(dir.name("fairness", "all", "json"), report_json(report, groups).dump(2) + "\n");
  write_plot(dir, "fdr", "all", render_fdr_curve(report, RenderSpec{}));

  char line[160];
  out << "target_fmr  tau           achieved_fmr  A(tau)    B(tau)    FDR\n";
  for (const auto& p : report.curve) {
    std::snprintf(line, sizeof line, "%-10.0e  %-12.6g  %-12.6g  %-8.5f  %-8.5f  %.5f\n",
                  p.target_fmr, p.tau, p.achieved_fmr, p.a_tau, p.b_tau, p.fdr);
    out << line;
  }
  std::snprintf(line, sizeof line, "FDR AUC %.5f over %zu groups\n", report.fdr_auc,
                groups.size());
  out << line;
  return 0;
}

std::string prerequisite(const std::string& file, const std::string& subcommand,
                         const std::string& manifest) {
  if (!fs::exists(file)) {
    throw Error(ErrorCode::kMissingPrerequisite,
                "missing " + file + "; run `fairlens " + subcommand + " --manifest " + manifest +
                    "` first");
  }
  return file;
}

Grid single_map(const std::string& path) {
  const auto maps = read_amap_file(path);
  if (maps.size() != 1) {
    throw Error(ErrorCode::kMalformedInput, path + ": expected exactly one record");
  }
  return maps.front().grid;
}

struct PanelJob {
  std::string panel;
  std::string ext;
  std::function<std::vector<PlotOutput>()> plot;
  std::function<std::vector<std::uint8_t>()> raster;
};

int cmd_report(const ManifestArgs& a, std::ostream& out, std::ostream& err) {
  const CohortManifest m = load_manifest(a.manifest);
  OutputDir dir(m, a.out);
  RenderSpec spec;
  spec.colormap = a.colormap;
  spec.alpha = a.overlay_alpha;
  spec.validate();

  prerequisite(dir.path(dir.name("stats", "all", "json")), "stats", a.manifest);
  std::map<std::string, Grid> mam;
  std::map<std::string, Grid> amv;
  for (const auto& c : m.cohorts) {
    mam[c.label] = single_map(prerequisite(dir.path(dir.name("mam", c.label, "amap")), "stats", a.manifest));
    amv[c.label] = single_map(prerequisite(dir.path(dir.name("amv", c.label, "amap")), "stats", a.manifest));
  }
  std::optional<FairnessReport> fairness;
  if (m.scores) {
    const std::string f =
        prerequisite(dir.path(dir.name("fairness", "all", "json")), "fairness", a.manifest);
    std::ifstream in(f);
    fairness = report_from_json(Json::parse(in));
  } else {
    err << "report: warning: manifest has no scores; FDR curve omitted\n";
  }

  const Grid& ref_mam = mam.at(m.reference);
  const std::size_t w = ref_mam.width();
  const std::size_t h = ref_mam.height();
  ImageTensor face(Tensor3(Shape3{3, h, w}, 0.5));
  if (m.overlay_image) {
    face = to_image_tensor(decode_png(detail::read_file_bytes(*m.overlay_image)));
  }
  auto fit = [&](const Grid& g) {
    return g.width() == face.width() && g.height() == face.height()
               ? g
               : bilinear_resize(g, face.width(), face.height());
  };
  auto ranged = [&](std::initializer_list<const Grid*> grids) {
    std::vector<Grid> v;
    for (const Grid* g : grids) v.push_back(*g);
    RenderSpec s = spec;
    const ValueRange r = common_range(v);
    if (r.hi > r.lo) s.fixed_range = r;
    return s;
  };

  Json artifacts = Json::array();
  auto record = [&](const std::string& file, const std::string& panel, const std::string& groups) {
    artifacts.push_back({{"file", file}, {"panel", panel}, {"groups", groups}});
  };

  std::size_t pairs = 0;
  for (const auto& c : m.cohorts) {
    if (c.label == m.reference) continue;
    ++pairs;
    const std::string groups = c.label + "-" + m.reference;
    const Grid& ref_amv = amv.at(m.reference);
    const Grid& oth_mam = mam.at(c.label);
    const Grid& oth_amv = amv.at(c.label);
    const Grid damv = single_map(
        prerequisite(dir.path(dir.name("damv", groups, "amap")), "stats", a.manifest));
    const RenderSpec mam_spec = ranged({&ref_mam, &oth_mam});
    const RenderSpec amv_spec = ranged({&ref_amv, &oth_amv});
    auto pair_png = [](const Grid& x, const Grid& y, const RenderSpec& s) {
      const std::vector<RgbImage> panels{heatmap_raster(x, s), heatmap_raster(y, s)};
      return encode_png(hstack(panels));
    };
    auto hist = [&](const Grid& x, const Grid& y, const std::string& what) {
      return render_histograms({m.reference, value_histogram(x, a.bins)},
                               {c.label, value_histogram(y, a.bins)},
                               what + " value histogram: " + c.label + " vs " + m.reference);
    };

    std::vector<PanelJob> jobs{
        {"mam", "png", {}, [&] { return pair_png(ref_mam, oth_mam, mam_spec); }},
        {"mam-overlay", "png", {}, [&] {
           const std::vector<RgbImage> panels{overlay_raster(face, fit(ref_mam), mam_spec),
                                              overlay_raster(face, fit(oth_mam), mam_spec)};
           return encode_png(hstack(panels));
         }},
        {"mam-hist", "svg", [&] { return std::vector{hist(ref_mam, oth_mam, "MAM")}; }, {}},
        {"amv", "png", {}, [&] { return pair_png(ref_amv, oth_amv, amv_spec); }},
        {"amv-hist", "svg", [&] { return std::vector{hist(ref_amv, oth_amv, "AM-V")}; }, {}},
        {"damv", "png", {}, [&] { return render_heatmap(damv, spec); }},
        {"damv-overlay", "png", {}, [&] { return render_overlay(face, fit(damv), spec); }},
        {"sx", "svg", [&] {
           const auto p = render_profiles(compute_spatial_profile(ref_amv, m.reference),
                                          compute_spatial_profile(oth_amv, c.label), spec);
           return std::vector{p.s_x, p.s_y};
         }, {}},
    };
    std::vector<std::vector<PlotOutput>> plots(jobs.size());
    std::vector<std::vector<std::uint8_t>> rasters(jobs.size());
    parallel_for(jobs.size(), a.threads, [&](std::size_t i) {
      if (jobs[i].plot) {
        plots[i] = jobs[i].plot();
      } else {
        rasters[i] = jobs[i].raster();
      }
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].plot) {
        // The profile job yields both axes.
        const std::vector<std::string> names =
            plots[i].size() == 2 ? std::vector<std::string>{"sx", "sy"}
                                 : std::vector<std::string>{jobs[i].panel};
        for (std::size_t k = 0; k < names.size(); ++k) {
          write_plot(dir, names[k], groups, plots[i][k]);
          record(dir.name(names[k], groups, "svg"), names[k], groups);
          record(dir.name(names[k], groups, "csv"), names[k], groups);
        }
      } else {
        const std::string file = dir.name(jobs[i].panel, groups, "png");
        dir.write(file, rasters[i]);
        record(file, jobs[i].panel, groups);
      }
    }
  }
  if (pairs == 0) err << "report: warning: no comparison cohorts; only the FDR curve is drawn\n";

  if (fairness) {
    write_plot(dir, "fdr", "all", render_fdr_curve(*fairness, spec));
    record(dir.name("fdr", "all", "svg"), "fdr", "all");
    record(dir.name("fdr", "all", "csv"), "fdr", "all");
  }
  const Json index{{"dataset", m.dataset},
                   {"model", m.model},
                   {"reference", m.reference},
                   {"colormap", spec.colormap},
                   {"overlay_alpha", spec.alpha},
                   {"bins", a.bins},
                   {"artifacts", artifacts}};
  dir.write(dir.name("index", "all", "json"), index.dump(2) + "\n");
  out << "report: wrote " << dir.written().size() << " files to " << dir.root() << '\n';
  return 0;
}

int cmd_selftest(std::ostream& out) {
  bool ok = true;
  for (const auto& r : run_selftest()) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

void add_manifest_options(CLI::App* sub, ManifestArgs& a) {
  sub->add_option("--manifest", a.manifest, "Run manifest (JSON)")->required();
  sub->add_option("--out", a.out, "Output directory (overrides manifest and environment)");
  sub->add_option("--threads", a.threads, "Worker threads (0 = all cores)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Activation-map statistics and fairness analysis for face recognition", "fairlens"};
  app.require_subcommand(1);

  CamArgs cam;
  auto* cam_cmd = app.add_subcommand("cam", "Compute symmetrised Score-CAM maps into an archive");
  cam_cmd->add_option("--model", cam.model, "Model file (TMDL)")->required();
  auto* images = cam_cmd->add_option("--images", cam.images, "Directory of 112x112 PNG faces");
  auto* list = cam_cmd->add_option("--list", cam.list, "CSV image list: path,ethnicity,gender");
  images->excludes(list);
  cam_cmd->add_option("--out", cam.out, "Output archive (AMAP)")->required();
  cam_cmd->add_option("--ethnicity", cam.ethnicity, "Ethnicity tag for --images (C, E, I, A)")
      ->check(CLI::IsMember({"C", "E", "I", "A", "unknown"}));
  cam_cmd->add_option("--gender", cam.gender, "Gender tag for --images (m, f)")
      ->check(CLI::IsMember({"m", "f", "unknown"}));
  cam_cmd->add_flag("--skip-bad", cam.skip_bad, "Skip unreadable images instead of failing");
  cam_cmd->add_option("--threads", cam.threads, "Worker threads (0 = all cores)");

  ManifestArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Cohort MAM, AM-V, D-AM-V and profiles");
  add_manifest_options(stats_cmd, stats);

  ManifestArgs fair;
  auto* fair_cmd = app.add_subcommand("fairness", "FMR/FNMR calibration and FDR curve");
  add_manifest_options(fair_cmd, fair);
  fair_cmd->add_option("--alpha", fair.alpha, "FMR weight in FDR")->check(CLI::Range(0.0, 1.0));
  fair_cmd->add_option("--targets", fair.targets, "Target FMRs, comma separated")
      ->delimiter(',')
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            double v = 0;
            try {
              v = std::stod(s);
            } catch (...) {
              return "target '" + s + "' is not a number";
            }
            return v > 0.0 && v <= 1.0 ? "" : "target " + s + " must lie in (0, 1]";
          },
          "(0,1]"));

  ManifestArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Render the figure bundle");
  add_manifest_options(rep_cmd, rep);
  rep_cmd->add_option("--colormap", rep.colormap, "Colormap")
      ->check(CLI::IsMember(Colormap::names()));
  rep_cmd->add_option("--bins", rep.bins, "Histogram bins")->check(CLI::PositiveNumber);
  rep_cmd->add_option("--overlay-alpha", rep.overlay_alpha, "Heatmap weight in overlays")
      ->check(CLI::Range(0.0, 1.0));

  auto* self_cmd = app.add_subcommand("selftest", "Run the embedded oracle checks");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }
  if (cam_cmd->parsed() && cam.images.empty() && cam.list.empty()) {
    err << "fairlens cam: error: one of --images or --list is required\n";
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (cam_cmd->parsed()) return cmd_cam(cam, out, err);
    if (stats_cmd->parsed()) return cmd_stats(stats, out, err);
    if (fair_cmd->parsed()) return cmd_fairness(fair, out, err);
    if (rep_cmd->parsed()) return cmd_report(rep, out, err);
    if (self_cmd->parsed()) return cmd_selftest(out);
  } catch (const std::exception& e) {
    err << "fairlens " << name << ": error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace fairlens
