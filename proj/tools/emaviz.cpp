// emaviz: offline rendering, synthesis, validation, export/import and the HTTP service.
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "emaviz/datastore/export.hpp"
#include "emaviz/ema/json.hpp"
#include "emaviz/renderer/dashboard.hpp"
#include "emaviz/service/http_server.hpp"
#include "emaviz/synth/generate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace emaviz;

namespace {

/// Anything that failed on the filesystem or the store rather than in the input itself.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kInvalidInput = 1;
constexpr int kIoFailure = 2;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& path) {
  const auto text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

/// Writes through a sibling temp file so a failed run never leaves half a file behind.
void write_text(const fs::path& path, std::string_view text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out.flush()) throw IoError("cannot write " + path.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot write " + path.string() + ": " + ec.message());
}

ema::SurveyDefinition load_survey(const std::string& path) {
  return path == "builtin" ? ema::default_survey_definition() : ema::survey_from_json(read_json(path));
}

renderer::Theme load_theme(const std::string& path) {
  return path == "builtin" ? renderer::default_theme() : renderer::theme_from_json(read_json(path));
}

// ---- render ----------------------------------------------------------------------

struct RenderArgs {
  std::string in, out, week, theme = "builtin", participant, now, timezone = "UTC", title;
  bool layout = false;
};

int run_render(const RenderArgs& a) {
  const Date week = parse_date(a.week);
  const auto all = ema::responses_from_json(read_json(a.in));

  std::vector<ema::EmaResponse> in_week;
  std::set<std::string> participants;
  for (const auto& r : all) {
    if (!a.participant.empty() && r.participant != a.participant) continue;
    if (r.date < week || r.date >= week + 7) continue;
    participants.insert(r.participant);
    in_week.push_back(r);
  }
  if (participants.size() > 1)
    throw std::invalid_argument("responses from several participants; choose one with --participant");
  const std::string participant =
      !a.participant.empty() ? a.participant : participants.empty() ? "P001" : *participants.begin();

  ema::SlotCalendar calendar;
  calendar.zone = load_zone(a.timezone);
  // Offline renders default to a finished week so the output depends only on the input.
  const absl::Time now = a.now.empty() ? calendar.opens_at(week + 7, ema::SurveyWindow::morning)
                                       : Timestamp::parse(a.now).instant;
  const auto data = ema::build_week_dataset(participant, in_week, week, now, calendar);

  renderer::DashboardOptions options;
  if (!a.title.empty()) options.title = a.title;
  const auto dash = renderer::render_dashboard(data, load_theme(a.theme), options);
  write_text(a.out, dash.svg);
  if (a.layout) {
    auto layout_path = fs::path(a.out);
    layout_path.replace_extension(".layout.json");
    write_text(layout_path, renderer::layout_json(dash).dump(2) + "\n");
  }
  return 0;
}

// ---- synth / fixture -------------------------------------------------------------

struct SynthArgs {
  int n = 44;
  std::uint64_t seed = 7;
  std::string out, start = "2024-01-08", timezone = "UTC";
  double dropout = 0.05;
};

int run_synth(const SynthArgs& a) {
  synth::CohortOptions options;
  options.start = parse_date(a.start);
  options.timezone = a.timezone;
  options.dropout = a.dropout;
  const auto cohort = synth::generate_cohort(a.n, a.seed, options);

  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw IoError("cannot create " + a.out + ": " + ec.message());

  json index = {{"n", a.n}, {"seed", a.seed}, {"start", a.start}, {"timezone", a.timezone},
                {"participants", json::array()}};
  for (const auto& m : cohort) {
    const auto dir = fs::path(a.out) / m.plan.participant;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    const json meta = {{"plan", m.plan}, {"persona", synth::to_json(m.persona)},
                       {"profile", synth::to_string(m.profile)}};
    write_text(dir / "participant.json", meta.dump(2) + "\n");
    write_text(dir / "responses.json", ema::responses_to_json(m.responses).dump(2) + "\n");
    index["participants"].push_back({{"participant", m.plan.participant},
                                     {"order", scheduler::to_string(m.plan.order)},
                                     {"profile", synth::to_string(m.profile)},
                                     {"responses", m.responses.size()}});
  }
  write_text(fs::path(a.out) / "cohort.json", index.dump(2) + "\n");
  return 0;
}

struct FixtureArgs {
  std::uint64_t seed = 7;
  std::string out, week = "2024-01-08", profile = "full", participant = "P001", timezone = "UTC";
  double dropout = 0.05;
};

int run_fixture(const FixtureArgs& a) {
  synth::WeekOptions options;
  options.dropout = a.dropout;
  options.participant = a.participant;
  options.calendar.zone = load_zone(a.timezone);
  const auto responses = synth::generate_week(a.seed, synth::random_persona(a.seed),
                                              synth::parse_profile(a.profile), parse_date(a.week), options);
  write_text(a.out, ema::responses_to_json(responses).dump(2) + "\n");
  return 0;
}

// ---- validate ------------------------------------------------------------------------

struct ValidateArgs {
  std::string in, survey = "builtin";
};

/// Returns the number of problems found in one responses file, reporting each on stderr.
int validate_file(const fs::path& path, const ema::SurveyDefinition& def, int& checked) {
  std::vector<ema::EmaResponse> responses;
  try {
    responses = ema::responses_from_json(read_json(path));
  } catch (const std::invalid_argument& e) {
    std::cerr << path.string() << ": " << e.what() << "\n";
    return 1;
  } catch (const json::exception& e) {
    std::cerr << path.string() << ": " << e.what() << "\n";
    return 1;
  }
  int problems = 0;
  for (const auto& r : responses) {
    ++checked;
    for (const auto& err : ema::validate_response(def, r)) {
      std::cerr << path.string() << ": " << r.participant << " " << format_date(r.date) << " "
                << ema::to_string(r.window) << " " << err.qid << ": " << err.message << "\n";
      ++problems;
    }
  }
  return problems;
}

int run_validate(const ValidateArgs& a) {
  const auto def = load_survey(a.survey);
  std::error_code ec;
  if (!fs::exists(a.in, ec)) throw IoError("no such file or directory: " + a.in);

  std::vector<fs::path> files;
  if (fs::is_directory(a.in)) {
    for (const auto& e : fs::recursive_directory_iterator(a.in))
      if (e.is_regular_file() && e.path().filename() == "responses.json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(a.in);
  }

  int checked = 0, problems = 0;
  for (const auto& f : files) problems += validate_file(f, def, checked);
  std::cout << files.size() << " file(s), " << checked << " response(s), " << problems << " problem(s)\n";
  return problems == 0 ? 0 : kInvalidInput;
}

// ---- export / import --------------------------------------------------------------------

struct ExportArgs {
  std::string data, format = "csv", out, participant, from, to;
};

int run_export(const ExportArgs& a) {
  if (!fs::exists(a.data)) throw IoError("no such store: " + a.data);
  datastore::LogStore store(a.data);
  datastore::ExportFilter filter;
  if (!a.participant.empty()) filter.participant = a.participant;
  if (!a.from.empty()) filter.from = parse_date(a.from);
  if (!a.to.empty()) filter.to = parse_date(a.to);
  const auto text = a.format == "csv" ? datastore::export_csv(store, filter)
                                      : datastore::export_json(store, filter).dump(2) + "\n";
  if (a.out.empty() || a.out == "-") {
    std::cout << text;
  } else {
    write_text(a.out, text);
  }
  return 0;
}

struct ImportArgs {
  std::string data, in, survey = "builtin";
};

int run_import(const ImportArgs& a) {
  const auto def = load_survey(a.survey);
  const auto text = read_text(a.in);

  // Decode everything before the store is opened so bad input leaves no trace.
  std::vector<datastore::ExportRow> rows;
  std::vector<ema::EmaResponse> responses;
  if (fs::path(a.in).extension() == ".csv") {
    rows = datastore::rows_from_csv(text);
  } else {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw std::invalid_argument(a.in + ": " + e.what());
    }
    if (j.is_object() && j.contains("rows")) {
      rows = datastore::rows_from_json(j);
    } else {
      responses = ema::responses_from_json(j);
      for (const auto& r : responses) {
        const auto errors = ema::validate_response(def, r);
        if (!errors.empty())
          throw std::invalid_argument(r.participant + " " + format_date(r.date) + " " + errors[0].qid + ": " +
                                      errors[0].message);
      }
    }
  }

  datastore::LogStore store(a.data);
  int stored = datastore::import_rows(store, rows, def);
  for (const auto& r : responses) {
    if (!store.has_participant(r.participant)) store.put_participant(r.participant);
    store.put_response(r);
    ++stored;
  }
  std::cout << stored << " response(s) imported\n";
  return 0;
}

// ---- serve ---------------------------------------------------------------------------------

struct ServeArgs {
  std::string config;
};

int run_serve(const ServeArgs& a) {
  auto config = service::load_config(a.config);
  service::apply_env_overrides(config, [](const char* name) { return std::getenv(name); });
  if (config.data_path.empty()) throw std::invalid_argument("config has no data path");

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  datastore::LogStore store(config.data_path);
  if (const auto rec = store.recovery(); rec.discarded_bytes > 0)
    std::cerr << "store: dropped " << rec.discarded_bytes << " byte(s) of torn tail\n";
  scheduler::StreamNotifier notifier(std::cout);
  service::Service svc(config, store, absl::Now, &notifier);
  service::HttpServer server(svc);
  const int port = server.bind(config.host, config.port);
  if (port < 0) throw IoError("cannot listen on " + config.host + ":" + std::to_string(config.port));
  std::cerr << "listening on " << config.host << ":" << port << "\n";

  bool ok = true;
  std::thread http([&] { ok = server.run(); });
  service::MinuteTicker ticker([&] {
    try {
      svc.tick();
    } catch (const std::exception& e) {
      std::cerr << "reminder tick failed: " << e.what() << "\n";
    }
  });

  int sig = 0;
  sigwait(&signals, &sig);
  std::cerr << "stopping\n";
  ticker.stop();
  server.stop();
  http.join();
  return ok ? 0 : kIoFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMA visualization toolkit"};
  app.require_subcommand(1);

  RenderArgs render;
  auto* r = app.add_subcommand("render", "Render one week's dashboard to SVG");
  r->add_option("--in", render.in, "Responses JSON (array or {\"responses\": [...]})")->required();
  r->add_option("--week", render.week, "First day of the week, YYYY-MM-DD")->required();
  r->add_option("--out", render.out, "Output SVG")->required();
  r->add_option("--theme", render.theme, "Theme JSON or \"builtin\"");
  r->add_option("--participant", render.participant, "Participant when the file holds several");
  r->add_option("--now", render.now, "Render as of this RFC 3339 instant (default: week finished)");
  r->add_option("--timezone", render.timezone, "Participant home timezone");
  r->add_option("--title", render.title, "Dashboard title");
  r->add_flag("--layout", render.layout, "Also write <out>.layout.json");

  SynthArgs synth_args;
  auto* s = app.add_subcommand("synth", "Generate a synthetic cohort, one directory per participant");
  s->add_option("--n", synth_args.n, "Participants")->check(CLI::PositiveNumber);
  s->add_option("--seed", synth_args.seed, "Seed");
  s->add_option("--out", synth_args.out, "Output directory")->required();
  s->add_option("--start", synth_args.start, "Study start, a Monday");
  s->add_option("--timezone", synth_args.timezone, "Home timezone for every participant");
  s->add_option("--dropout", synth_args.dropout, "Per-question skip chance")->check(CLI::Range(0.0, 1.0));

  FixtureArgs fixture;
  auto* f = app.add_subcommand("fixture", "Generate one synthetic week as a responses file");
  f->add_option("--seed", fixture.seed, "Seed (also picks the persona)");
  f->add_option("--week", fixture.week, "First day of the week");
  f->add_option("--profile", fixture.profile, "full, minimal-completer, binger:K or random:P");
  f->add_option("--participant", fixture.participant, "Participant code");
  f->add_option("--timezone", fixture.timezone, "Home timezone");
  f->add_option("--dropout", fixture.dropout, "Per-question skip chance")->check(CLI::Range(0.0, 1.0));
  f->add_option("--out", fixture.out, "Output JSON")->required();

  ValidateArgs validate;
  auto* v = app.add_subcommand("validate", "Validate a responses file or a synth output directory");
  v->add_option("--in", validate.in, "File or directory")->required();
  v->add_option("--survey", validate.survey, "Survey definition JSON or \"builtin\"");

  ExportArgs export_args;
  auto* e = app.add_subcommand("export", "Export stored responses");
  e->add_option("--data", export_args.data, "Store file")->required();
  e->add_option("--format", export_args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  e->add_option("--out", export_args.out, "Output file (default stdout)");
  e->add_option("--participant", export_args.participant, "Only this participant");
  e->add_option("--from", export_args.from, "First date, inclusive");
  e->add_option("--to", export_args.to, "Last date, inclusive");

  ImportArgs import_args;
  auto* i = app.add_subcommand("import", "Import an export (CSV or JSON) or a responses file");
  i->add_option("--data", import_args.data, "Store file (created if absent)")->required();
  i->add_option("--in", import_args.in, "Input file")->required();
  i->add_option("--survey", import_args.survey, "Survey definition JSON or \"builtin\"");

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the HTTP service and the reminder loop");
  sv->add_option("--config", serve.config, "Service config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (r->parsed()) return run_render(render);
    if (s->parsed()) return run_synth(synth_args);
    if (f->parsed()) return run_fixture(fixture);
    if (v->parsed()) return run_validate(validate);
    if (e->parsed()) return run_export(export_args);
    if (i->parsed()) return run_import(import_args);
    if (sv->parsed()) return run_serve(serve);
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kIoFailure;
  } catch (const datastore::StorageError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kIoFailure;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
