#include "cgvf/scenario_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace cgvf {

namespace {

struct ConfigValue {
  enum class Kind { kNumber, kString, kBool, kArray };
  Kind kind = Kind::kNumber;
  double number = 0.0;
  std::string text;
  bool boolean = false;
  std::vector<ConfigValue> items;
  int line = 1, col = 1;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line, col);
  }
  double as_number() const {
    if (kind != Kind::kNumber) fail("expected a number");
    return number;
  }
  int as_int() const {
    const double v = as_number();
    if (v != std::floor(v)) fail("expected an integer");
    return static_cast<int>(v);
  }
  bool as_bool() const {
    if (kind != Kind::kBool) fail("expected true or false");
    return boolean;
  }
  const std::string& as_string() const {
    if (kind != Kind::kString) fail("expected a string");
    return text;
  }
  const std::vector<ConfigValue>& as_array() const {
    if (kind != Kind::kArray) fail("expected an array");
    return items;
  }
  Eigen::VectorXd as_vector() const {
    const auto& a = as_array();
    Eigen::VectorXd v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].as_number();
    return v;
  }
};

using Section = std::map<std::string, ConfigValue>;
using Document = std::map<std::string, Section>;

class DocParser {
 public:
  explicit DocParser(const std::string& text) : text_(text) {}

  Document run() {
    Document doc;
    std::string section;
    while (!eof()) {
      skip_blank();
      if (eof()) break;
      if (peek() == '[') {
        section = parse_section_header();
        if (doc.count(section)) fail("duplicate section [" + section + "]");
        doc[section];
        continue;
      }
      if (section.empty()) fail("key outside any [section]");
      auto [key, value] = parse_key_value();
      if (doc[section].count(key)) {
        fail("duplicate key '" + key + "' in [" + section + "]");
      }
      doc[section].emplace(std::move(key), std::move(value));
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char get() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, col_);
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) get();
    if (!eof() && peek() == '#') {
      while (!eof() && peek() != '\n') get();
    }
  }

  void skip_blank() {
    for (;;) {
      skip_inline_ws();
      if (!eof() && peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  void expect_line_end() {
    skip_inline_ws();
    if (eof()) return;
    if (peek() != '\n') fail("unexpected trailing characters");
    get();
  }

  std::string parse_section_header() {
    get();  // '['
    std::string name;
    while (!eof() && peek() != ']' && peek() != '\n') name += get();
    if (eof() || peek() != ']') fail("unterminated section header");
    get();
    expect_line_end();
    if (name.empty()) fail("empty section name");
    return name;
  }

  std::pair<std::string, ConfigValue> parse_key_value() {
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                      peek() == '_' || peek() == '.')) {
      key += get();
    }
    if (key.empty()) fail("expected a key");
    skip_inline_ws();
    if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
    get();
    skip_blank_in_value();
    ConfigValue value = parse_value();
    expect_line_end();
    return {key, value};
  }

  // inside values, newlines are allowed only within arrays
  void skip_blank_in_value() { skip_inline_ws(); }

  void skip_ws_multiline() {
    for (;;) {
      skip_inline_ws();
      if (!eof() && peek() == '\n') {
        get();
        continue;
      }
      return;
    }
  }

  ConfigValue parse_value() {
    ConfigValue v;
    v.line = line_;
    v.col = col_;
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"') {
      v.kind = ConfigValue::Kind::kString;
      v.text = parse_string();
      return v;
    }
    if (c == '[') {
      v.kind = ConfigValue::Kind::kArray;
      get();
      skip_ws_multiline();
      while (!eof() && peek() != ']') {
        v.items.push_back(parse_value());
        skip_ws_multiline();
        if (!eof() && peek() == ',') {
          get();
          skip_ws_multiline();
        } else {
          break;
        }
      }
      if (eof() || peek() != ']') fail("unterminated array");
      get();
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) word += get();
      if (word == "true" || word == "false") {
        v.kind = ConfigValue::Kind::kBool;
        v.boolean = word == "true";
        return v;
      }
      fail("unexpected word '" + word + "'");
    }
    v.kind = ConfigValue::Kind::kNumber;
    v.number = parse_number();
    return v;
  }

  std::string parse_string() {
    get();  // '"'
    std::string out;
    while (!eof() && peek() != '"') {
      char c = get();
      if (c == '\\' && !eof() && (peek() == '"' || peek() == '\\')) c = get();
      if (c == '\n') fail("unterminated string");
      out += c;
    }
    if (eof()) fail("unterminated string");
    get();
    return out;
  }

  double parse_number() {
    std::string num;
    if (!eof() && (peek() == '+' || peek() == '-')) num += get();
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) ||
                      peek() == '.' || peek() == 'e' || peek() == 'E' ||
                      ((peek() == '+' || peek() == '-') && !num.empty() &&
                       (num.back() == 'e' || num.back() == 'E')))) {
      num += get();
    }
    try {
      size_t used = 0;
      const double v = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
      return v;
    } catch (const std::exception&) {
      fail("bad number '" + num + "'");
    }
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

void reject_unknown_keys(const std::string& section, const Section& table,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : table) {
    if (!allowed.count(key)) {
      throw InvalidArgument("unknown key '" + key + "' in [" + section + "]");
    }
  }
}

const ConfigValue* find(const Section& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

DesiredSetPtr parse_path_spec(const std::string& spec, int explicit_params) {
  const auto strip = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_of(" \t") == s.size() - 1 ? s.find_last_not_of(" \t") + 1
                                                     : s.size();
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b);
  };
  if (spec.rfind("expr:", 0) == 0) {
    std::vector<std::string> comps;
    std::string body = spec.substr(5);
    std::stringstream ss(body);
    std::string part;
    while (std::getline(ss, part, ';')) {
      part = strip(part);
      if (!part.empty()) comps.push_back(part);
    }
    int k = explicit_params > 0 ? explicit_params : 1;
    if (explicit_params == 0) {
      // infer: any reference to w1/w2 means a two-parameter set
      for (const std::string& c : comps) {
        if (c.find("w1") != std::string::npos || c.find("w2") != std::string::npos) {
          k = 2;
        }
      }
    }
    return make_expression_set(comps, k);
  }
  const size_t open = spec.find('(');
  if (open == std::string::npos || spec.back() != ')') {
    throw InvalidArgument("bad path spec '" + spec +
                          "': expected name(args) or expr: ...");
  }
  const std::string name = strip(spec.substr(0, open));
  const std::string args = spec.substr(open + 1, spec.size() - open - 2);
  std::vector<double> params;
  std::stringstream ss(args);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = strip(part);
    if (part.empty()) continue;
    try {
      size_t used = 0;
      params.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidArgument("bad numeric argument '" + part + "' in path spec '" +
                            spec + "'");
    }
  }
  return catalog(name, params);
}

CommGraph parse_graph(const Section& s, int robot_count) {
  reject_unknown_keys("graph", s, {"cycle", "vertices", "edges"});
  if (const ConfigValue* c = find(s, "cycle")) {
    const int n = c->as_int();
    if (n != robot_count) {
      throw InvalidArgument("graph cycle(" + std::to_string(n) + ") does not match " +
                            std::to_string(robot_count) + " robots");
    }
    return CommGraph::cycle(n);
  }
  const ConfigValue* edges = find(s, "edges");
  if (!edges) throw InvalidArgument("[graph] needs either 'cycle' or 'edges'");
  int vertices = robot_count;
  if (const ConfigValue* v = find(s, "vertices")) vertices = v->as_int();
  std::vector<Edge> list;
  for (const ConfigValue& pair : edges->as_array()) {
    const auto& p = pair.as_array();
    if (p.size() != 2) pair.fail("edge entries are [head, tail] pairs");
    list.push_back({p[0].as_int(), p[1].as_int()});
  }
  return CommGraph(vertices, std::move(list));
}

Eigen::VectorXd parse_edge_deltas(const CommGraph& graph, const ConfigValue& value) {
  Eigen::VectorXd deltas = Eigen::VectorXd::Zero(graph.edge_count());
  Eigen::VectorXd seen = Eigen::VectorXd::Zero(graph.edge_count());
  for (const ConfigValue& entry : value.as_array()) {
    const auto& t = entry.as_array();
    if (t.size() != 3) entry.fail("delta entries are [head, tail, value] triples");
    const int i = t[0].as_int(), j = t[1].as_int();
    auto [e, sign] = graph.edge_between(i, j);
    if (e < 0) entry.fail("no edge between " + std::to_string(i) + " and " +
                          std::to_string(j));
    const double v = sign * t[2].as_number();  // store in edge orientation
    if (seen[e] && deltas[e] != v) {
      entry.fail("delta for edge (" + std::to_string(i) + "," + std::to_string(j) +
                 ") conflicts with its reverse entry (antisymmetry)");
    }
    deltas[e] = v;
    seen[e] = 1.0;
  }
  return deltas;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  Document doc = DocParser(text).run();
  for (const auto& [name, table] : doc) {
    static const std::set<std::string> known = {"run",    "graph",  "robots",
                                                "coordination", "safety", "guidance"};
    if (!known.count(name)) throw InvalidArgument("unknown section [" + name + "]");
  }

  Scenario sc;

  // [run]
  if (doc.count("run")) {
    const Section& s = doc["run"];
    reject_unknown_keys("run", s,
                        {"name", "duration_s", "step_s", "integrator", "decimate", "seed"});
    if (const auto* v = find(s, "name")) sc.name = v->as_string();
    if (const auto* v = find(s, "duration_s")) sc.duration_s = v->as_number();
    if (const auto* v = find(s, "step_s")) sc.step_s = v->as_number();
    if (const auto* v = find(s, "integrator")) {
      const std::string& kind = v->as_string();
      if (kind == "euler") {
        sc.integrator = IntegratorKind::kEuler;
      } else if (kind == "rk4") {
        sc.integrator = IntegratorKind::kRk4;
      } else {
        v->fail("integrator must be \"euler\" or \"rk4\"");
      }
    }
    if (const auto* v = find(s, "decimate")) sc.telemetry_decimation = v->as_int();
    if (const auto* v = find(s, "seed")) sc.seed = static_cast<uint64_t>(v->as_number());
  }

  // [guidance] before robots: initial rows depend on the model
  if (doc.count("guidance")) {
    const Section& s = doc["guidance"];
    reject_unknown_keys("guidance", s,
                        {"model", "v", "k_theta", "sat", "gamma_floor"});
    if (const auto* v = find(s, "model")) {
      const std::string& kind = v->as_string();
      if (kind == "dubins") {
        sc.model = ModelKind::kDubins;
      } else if (kind == "single_integrator") {
        sc.model = ModelKind::kSingleIntegrator;
      } else {
        v->fail("model must be \"single_integrator\" or \"dubins\"");
      }
    }
    if (const auto* v = find(s, "v")) sc.guidance.v = v->as_number();
    if (const auto* v = find(s, "k_theta")) sc.guidance.k_theta = v->as_number();
    if (const auto* v = find(s, "sat")) {
      const auto& pair = v->as_array();
      if (pair.size() != 2) v->fail("sat is [a, b]");
      sc.guidance.sat_a = pair[0].as_number();
      sc.guidance.sat_b = pair[1].as_number();
    }
    if (const auto* v = find(s, "gamma_floor")) sc.guidance.gamma_floor = v->as_number();
  }

  // [robots]
  if (!doc.count("robots")) throw InvalidArgument("missing [robots] section");
  {
    const Section& s = doc["robots"];
    reject_unknown_keys(
        "robots", s, {"count", "paths", "params", "gains", "gains_list", "initials",
                      "headings"});
    const ConfigValue* count = find(s, "count");
    if (!count) throw InvalidArgument("[robots] needs 'count'");
    const int N = count->as_int();
    if (N < 1) count->fail("robot count must be positive");
    sc.robots.resize(static_cast<size_t>(N));

    int explicit_params = 0;
    if (const auto* v = find(s, "params")) explicit_params = v->as_int();

    const ConfigValue* paths = find(s, "paths");
    if (!paths) throw InvalidArgument("[robots] needs 'paths'");
    const auto& path_list = paths->as_array();
    if (path_list.size() != 1 && path_list.size() != static_cast<size_t>(N)) {
      paths->fail("'paths' needs 1 shared entry or one per robot");
    }
    std::map<std::string, DesiredSetPtr> cache;
    for (int i = 0; i < N; ++i) {
      const std::string& spec =
          path_list[path_list.size() == 1 ? 0 : static_cast<size_t>(i)].as_string();
      auto it = cache.find(spec);
      if (it == cache.end()) {
        it = cache.emplace(spec, parse_path_spec(spec, explicit_params)).first;
      }
      sc.robots[static_cast<size_t>(i)].set = it->second;
    }
    const int n = sc.ambient_dim();
    const int k = sc.param_count();

    if (const auto* v = find(s, "gains_list")) {
      const auto& rows = v->as_array();
      if (rows.size() != static_cast<size_t>(N)) v->fail("gains_list needs one row per robot");
      for (int i = 0; i < N; ++i) {
        sc.robots[static_cast<size_t>(i)].k_phi = rows[static_cast<size_t>(i)].as_vector();
      }
    } else if (const auto* v = find(s, "gains")) {
      const Eigen::VectorXd g = v->as_vector();
      for (RobotSpec& r : sc.robots) r.k_phi = g;
    } else {
      throw InvalidArgument("[robots] needs 'gains' or 'gains_list'");
    }

    const ConfigValue* initials = find(s, "initials");
    if (!initials) throw InvalidArgument("[robots] needs 'initials'");
    const auto& rows = initials->as_array();
    if (rows.size() != static_cast<size_t>(N)) {
      initials->fail("'initials' needs one row per robot");
    }
    for (int i = 0; i < N; ++i) {
      const Eigen::VectorXd row = rows[static_cast<size_t>(i)].as_vector();
      if (row.size() != n + k) {
        rows[static_cast<size_t>(i)].fail("initial state needs " +
                                          std::to_string(n + k) + " entries (x, w)");
      }
      sc.robots[static_cast<size_t>(i)].initial_xi = row;
    }
    if (const auto* v = find(s, "headings")) {
      const auto& h = v->as_array();
      if (h.size() != static_cast<size_t>(N)) v->fail("'headings' needs one entry per robot");
      for (int i = 0; i < N; ++i) {
        sc.robots[static_cast<size_t>(i)].initial_heading =
            h[static_cast<size_t>(i)].as_number();
      }
    }
  }

  // [graph]
  if (!doc.count("graph")) throw InvalidArgument("missing [graph] section");
  sc.graph = parse_graph(doc["graph"], sc.robot_count());

  // [coordination]
  const int k = sc.param_count();
  sc.coordination.deltas.assign(static_cast<size_t>(k),
                                Eigen::VectorXd::Zero(sc.graph.edge_count()));
  if (doc.count("coordination")) {
    const Section& s = doc["coordination"];
    reject_unknown_keys("coordination", s,
                        {"k_c", "k_c1", "k_c2", "delta_reference", "delta_reference1",
                         "delta_reference2", "deltas", "deltas1", "deltas2",
                         "desired_speeds", "comm_interval_s", "packet_loss"});
    if (const auto* v = find(s, "k_c")) {
      sc.coordination.kc1 = v->as_number();
      if (k == 2) sc.coordination.kc2 = v->as_number();
    }
    if (const auto* v = find(s, "k_c1")) sc.coordination.kc1 = v->as_number();
    if (const auto* v = find(s, "k_c2")) sc.coordination.kc2 = v->as_number();

    const auto load_param_deltas = [&](int m, const char* ref_key, const char* edge_key) {
      const ConfigValue* ref = find(s, ref_key);
      const ConfigValue* edges = find(s, edge_key);
      if (ref && edges) {
        throw InvalidArgument(std::string("give either '") + ref_key + "' or '" +
                              edge_key + "', not both");
      }
      if (ref) {
        const Eigen::VectorXd w_star = ref->as_vector();
        if (w_star.size() != sc.robot_count()) {
          ref->fail("reference configuration needs one entry per robot");
        }
        sc.coordination.deltas[static_cast<size_t>(m)] =
            deltas_from_reference(sc.graph, w_star);
      } else if (edges) {
        sc.coordination.deltas[static_cast<size_t>(m)] =
            parse_edge_deltas(sc.graph, *edges);
      }
    };
    if (k == 1) {
      load_param_deltas(0, "delta_reference", "deltas");
      if (find(s, "delta_reference1") || find(s, "delta_reference2") ||
          find(s, "deltas1") || find(s, "deltas2")) {
        throw InvalidArgument("one-parameter scenarios use 'delta_reference'/'deltas'");
      }
    } else {
      load_param_deltas(0, "delta_reference1", "deltas1");
      load_param_deltas(1, "delta_reference2", "deltas2");
      if (find(s, "delta_reference") || find(s, "deltas")) {
        throw InvalidArgument(
            "two-parameter scenarios use 'delta_reference1/2'/'deltas1/2'");
      }
    }
    if (const auto* v = find(s, "desired_speeds")) {
      const auto& pair = v->as_array();
      if (pair.size() != 2) v->fail("desired_speeds is [wdot1*, wdot2*]");
      sc.coordination.desired_speeds = {pair[0].as_number(), pair[1].as_number()};
    }
    if (const auto* v = find(s, "comm_interval_s")) sc.comm_interval_s = v->as_number();
    if (const auto* v = find(s, "packet_loss")) sc.packet_loss = v->as_number();
  }

  // [safety]
  if (doc.count("safety")) {
    const Section& s = doc["safety"];
    reject_unknown_keys("safety", s,
                        {"enabled", "R", "alpha", "activation_scale", "qp_tolerance",
                         "qp_max_iters"});
    if (const auto* v = find(s, "enabled")) sc.safety.enabled = v->as_bool();
    if (const auto* v = find(s, "R")) sc.safety.R = v->as_number();
    if (const auto* v = find(s, "alpha")) sc.safety.alpha = v->as_number();
    if (const auto* v = find(s, "activation_scale")) {
      sc.safety.activation_scale = v->as_number();
    }
    if (const auto* v = find(s, "qp_tolerance")) sc.safety.qp_tolerance = v->as_number();
    if (const auto* v = find(s, "qp_max_iters")) sc.safety.qp_max_iters = v->as_int();
  }

  sc.validate();
  for (int m = 0; m < k; ++m) {
    validate_delta_feasibility(sc.graph, sc.coordination.deltas[static_cast<size_t>(m)]);
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string vector_literal(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += g17(v[i]);
  }
  return out + "]";
}

}  // namespace

std::string serialize_scenario(const Scenario& sc) {
  std::ostringstream out;
  const int k = sc.param_count();

  out << "[run]\n";
  if (!sc.name.empty()) out << "name = \"" << sc.name << "\"\n";
  out << "duration_s = " << g17(sc.duration_s) << "\n";
  out << "step_s = " << g17(sc.step_s) << "\n";
  out << "integrator = \""
      << (sc.integrator == IntegratorKind::kRk4 ? "rk4" : "euler") << "\"\n";
  out << "decimate = " << sc.telemetry_decimation << "\n";
  out << "seed = " << sc.seed << "\n\n";

  out << "[graph]\n";
  bool is_cycle = false;
  if (sc.robot_count() >= 2) {
    try {
      CommGraph cyc = CommGraph::cycle(sc.robot_count());
      is_cycle = cyc.edge_count() == sc.graph.edge_count();
      for (int e = 0; is_cycle && e < cyc.edge_count(); ++e) {
        const Edge& a = cyc.edges()[static_cast<size_t>(e)];
        const Edge& b = sc.graph.edges()[static_cast<size_t>(e)];
        is_cycle = a.head == b.head && a.tail == b.tail;
      }
    } catch (const Error&) {
    }
  }
  if (is_cycle) {
    out << "cycle = " << sc.robot_count() << "\n\n";
  } else {
    out << "vertices = " << sc.graph.vertex_count() << "\n";
    out << "edges = [";
    for (int e = 0; e < sc.graph.edge_count(); ++e) {
      const Edge& edge = sc.graph.edges()[static_cast<size_t>(e)];
      if (e) out << ", ";
      out << "[" << edge.head << ", " << edge.tail << "]";
    }
    out << "]\n\n";
  }

  out << "[robots]\n";
  out << "count = " << sc.robot_count() << "\n";
  bool shared_path = true, shared_gains = true;
  for (const RobotSpec& r : sc.robots) {
    shared_path = shared_path && r.set->spec_string() == sc.robots[0].set->spec_string();
    shared_gains = shared_gains && r.k_phi == sc.robots[0].k_phi;
  }
  if (shared_path) {
    out << "paths = [\"" << sc.robots[0].set->spec_string() << "\"]\n";
  } else {
    out << "paths = [\n";
    for (const RobotSpec& r : sc.robots) out << "  \"" << r.set->spec_string() << "\",\n";
    out << "]\n";
  }
  if (shared_gains) {
    out << "gains = " << vector_literal(sc.robots[0].k_phi) << "\n";
  } else {
    out << "gains_list = [\n";
    for (const RobotSpec& r : sc.robots) out << "  " << vector_literal(r.k_phi) << ",\n";
    out << "]\n";
  }
  out << "initials = [\n";
  for (const RobotSpec& r : sc.robots) out << "  " << vector_literal(r.initial_xi) << ",\n";
  out << "]\n";
  if (sc.model == ModelKind::kDubins) {
    out << "headings = [";
    for (size_t i = 0; i < sc.robots.size(); ++i) {
      if (i) out << ", ";
      out << g17(sc.robots[i].initial_heading);
    }
    out << "]\n";
  }
  out << "\n[coordination]\n";
  if (k == 1 || sc.coordination.kc1 != sc.coordination.kc2) {
    out << "k_c1 = " << g17(sc.coordination.kc1) << "\n";
    if (k == 2) out << "k_c2 = " << g17(sc.coordination.kc2) << "\n";
  } else {
    out << "k_c = " << g17(sc.coordination.kc1) << "\n";
  }
  for (int m = 0; m < k; ++m) {
    out << "deltas" << (k == 1 ? std::string() : std::to_string(m + 1)) << " = [\n";
    const Eigen::VectorXd& d = sc.coordination.deltas[static_cast<size_t>(m)];
    for (int e = 0; e < sc.graph.edge_count(); ++e) {
      const Edge& edge = sc.graph.edges()[static_cast<size_t>(e)];
      out << "  [" << edge.head << ", " << edge.tail << ", " << g17(d[e]) << "],\n";
    }
    out << "]\n";
  }
  if (sc.coordination.desired_speeds) {
    out << "desired_speeds = [" << g17(sc.coordination.desired_speeds->first) << ", "
        << g17(sc.coordination.desired_speeds->second) << "]\n";
  }
  out << "comm_interval_s = " << g17(sc.comm_interval_s) << "\n";
  out << "packet_loss = " << g17(sc.packet_loss) << "\n";

  if (sc.safety.enabled) {
    out << "\n[safety]\n";
    out << "enabled = true\n";
    out << "R = " << g17(sc.safety.R) << "\n";
    out << "alpha = " << g17(sc.safety.alpha) << "\n";
    out << "activation_scale = " << g17(sc.safety.activation_scale) << "\n";
  }
  if (sc.model == ModelKind::kDubins) {
    out << "\n[guidance]\n";
    out << "model = \"dubins\"\n";
    out << "v = " << g17(sc.guidance.v) << "\n";
    out << "k_theta = " << g17(sc.guidance.k_theta) << "\n";
    out << "sat = [" << g17(sc.guidance.sat_a) << ", " << g17(sc.guidance.sat_b) << "]\n";
    out << "gamma_floor = " << g17(sc.guidance.gamma_floor) << "\n";
  }
  return out.str();
}

bool ValidationReport::hard_failure() const {
  for (const CheckResult& c : checks) {
    if (!c.passed && !c.warning_only) return true;
  }
  return false;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.passed ? "PASS " : (c.warning_only ? "WARN " : "FAIL ")) << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
  }
  return out.str();
}

ValidationReport validate_scenario(const Scenario& sc) {
  ValidationReport report;
  const auto add = [&](const std::string& name, bool ok, const std::string& detail,
                       bool warn_only = false) {
    report.checks.push_back({name, ok, warn_only, detail});
  };

  const bool connected = sc.graph.is_connected();
  const bool coordinating = sc.coordination.kc1 > 0.0 || sc.coordination.kc2 > 0.0;
  add("communication graph undirected and connected (Assumption 1)",
      connected || !coordinating,
      connected ? "" : "graph is disconnected; consensus cannot reach all robots",
      !coordinating);

  bool gains_ok = true;
  std::string gain_detail;
  for (size_t i = 0; i < sc.robots.size(); ++i) {
    const Eigen::VectorXd& g = sc.robots[i].k_phi;
    if (!(g.array() > 0.0).all()) {
      gains_ok = false;
      gain_detail = "robot " + std::to_string(i + 1) + " has a nonpositive gain";
      break;
    }
  }
  add("gain positivity", gains_ok, gain_detail);

  bool deltas_ok = true;
  std::string delta_detail;
  try {
    for (const Eigen::VectorXd& d : sc.coordination.deltas) {
      validate_delta_feasibility(sc.graph, d);
    }
  } catch (const Error& e) {
    deltas_ok = false;
    delta_detail = e.what();
  }
  add("parametric differences antisymmetric and cycle-feasible", deltas_ok,
      delta_detail);

  // Sampled derivative consistency and boundedness (Assumptions 2/3).
  bool derivs_ok = true;
  std::string deriv_detail;
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (size_t i = 0; i < sc.robots.size() && derivs_ok; ++i) {
    const DesiredSet& set = *sc.robots[i].set;
    for (int trial = 0; trial < 8 && derivs_ok; ++trial) {
      Eigen::VectorXd w(set.param_count());
      for (int m = 0; m < set.param_count(); ++m) w[m] = uni(rng);
      const double dev = check_derivatives(set, w, 1e-5);
      if (!std::isfinite(dev) || dev > 1e-4) {
        derivs_ok = false;
        deriv_detail = "robot " + std::to_string(i + 1) + " set '" + set.name() +
                       "' deviates by " + std::to_string(dev) + " at sampled w";
      }
      const Eigen::MatrixXd d1 = set.first_partials(w);
      const Eigen::MatrixXd d2 = set.second_partials(w);
      if (!d1.allFinite() || !d2.allFinite() || d1.cwiseAbs().maxCoeff() > 1e6 ||
          d2.cwiseAbs().maxCoeff() > 1e6) {
        derivs_ok = false;
        deriv_detail = "robot " + std::to_string(i + 1) +
                       " derivatives not bounded at sampled w (Assumptions 2/3)";
      }
    }
  }
  add("derivative consistency and boundedness sampled (Assumptions 2/3)", derivs_ok,
      deriv_detail);

  if (sc.safety.enabled) {
    bool ok = true;
    std::string detail;
    try {
      sc.safety.validate();
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    add("safety configuration", ok, detail);
  }
  if (sc.model == ModelKind::kDubins) {
    bool ok = true;
    std::string detail;
    try {
      sc.guidance.validate();
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    add("guidance configuration", ok, detail);
  }
  if (sc.param_count() == 2) {
    const bool has_speeds = sc.coordination.desired_speeds.has_value();
    add("desired parametric speeds set for surface scenario", has_speeds,
        has_speeds ? "" : "surface runs need desired_speeds");
  }
  add("communication within theory (fresh exchange, no loss)",
      sc.comm_interval_s <= sc.step_s && sc.packet_loss == 0.0,
      "slow or lossy exchange runs outside the convergence guarantees", true);
  return report;
}

}  // namespace cgvf
