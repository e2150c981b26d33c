#include "causalid/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "causalid/errors.hpp"

namespace causalid {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* name, const std::string& where) {
  if (!j.is_object() || !j.contains(name)) {
    throw ParseError(where + ": missing field '" + name + "'");
  }
  return j.at(name);
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers_of(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError(where + ": expected a number");
    out.push_back(x.get<double>());
  }
  return out;
}

int value_index(const DiscreteScm& m, const VertexName& v, const json& value,
                const std::string& where) {
  if (value.is_number_integer()) {
    int i = value.get<int>();
    if (i < 0 || i >= m.domain_of(v)) throw ModelError(where + ": value out of range for " + v);
    return i;
  }
  if (value.is_string()) {
    const auto text = value.get<std::string>();
    for (const auto& o : m.observed) {
      if (o.name == v) return m.value_of(v, text);
    }
    for (int i = 0; i < m.domain_of(v); ++i) {
      if (std::to_string(i) == text) return i;
    }
    throw ModelError(where + ": '" + text + "' is not a value of " + v);
  }
  throw ParseError(where + ": parent values must be strings or integers");
}

}  // namespace

DiscreteScm parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document must be an object");

  DiscreteScm m;
  const auto& observed = field(doc, "observed", "model");
  if (!observed.is_array()) throw ParseError("model: 'observed' must be an array");
  for (const auto& o : observed) {
    ObservedVar var;
    var.name = string_of(field(o, "name", "observed variable"), "observed variable name");
    const std::string where = "observed variable " + var.name;
    if (o.contains("values")) {
      if (!o.at("values").is_array()) throw ParseError(where + ": 'values' must be an array");
      for (const auto& label : o.at("values")) var.labels.push_back(string_of(label, where));
      var.domain = static_cast<int>(var.labels.size());
    } else if (o.contains("domain")) {
      if (!o.at("domain").is_number_integer()) throw ParseError(where + ": bad domain");
      var.domain = o.at("domain").get<int>();
    }
    m.observed.push_back(std::move(var));
    m.parents[m.observed.back().name];
  }

  if (doc.contains("parents")) {
    const auto& parents = doc.at("parents");
    if (!parents.is_object()) throw ParseError("model: 'parents' must be an object");
    for (const auto& [child, list] : parents.items()) {
      if (!list.is_array()) throw ParseError("parents of " + child + " must be an array");
      auto& ps = m.parents[child];
      for (const auto& p : list) ps.push_back(string_of(p, "parents of " + child));
    }
  }

  if (doc.contains("latents")) {
    const auto& latents = doc.at("latents");
    if (!latents.is_array()) throw ParseError("model: 'latents' must be an array");
    for (const auto& l : latents) {
      LatentVar var;
      var.name = string_of(field(l, "name", "latent variable"), "latent name");
      const std::string where = "latent " + var.name;
      var.marginal = numbers_of(field(l, "marginal", where), where + " marginal");
      var.domain = static_cast<int>(var.marginal.size());
      if (l.contains("domain")) {
        if (!l.at("domain").is_number_integer()) throw ParseError(where + ": bad domain");
        var.domain = l.at("domain").get<int>();
      }
      const auto& children = field(l, "children", where);
      if (!children.is_array()) throw ParseError(where + ": 'children' must be an array");
      for (const auto& c : children) {
        auto name = string_of(c, where + " child");
        auto& ps = m.parents[name];
        if (std::find(ps.begin(), ps.end(), var.name) == ps.end()) ps.push_back(var.name);
      }
      m.latents.push_back(std::move(var));
    }
  }

  const auto& cpts = field(doc, "cpts", "model");
  if (!cpts.is_object()) throw ParseError("model: 'cpts' must be an object");
  for (const auto& [name, rows] : cpts.items()) {
    const std::string where = "CPT of " + name;
    bool known = std::any_of(m.observed.begin(), m.observed.end(),
                             [&](const ObservedVar& o) { return o.name == name; });
    if (!known) throw ModelError(where + ": not an observed variable");
    if (!rows.is_array()) throw ParseError(where + ": expected an array of rows");
    const auto& ps = m.parents[name];
    std::size_t row_count = 1;
    for (const auto& p : ps) row_count *= static_cast<std::size_t>(m.domain_of(p));
    const auto domain = static_cast<std::size_t>(m.domain_of(name));
    std::vector<double> table(row_count * domain, 0.0);
    std::vector<bool> filled(row_count, false);
    for (const auto& row : rows) {
      std::vector<double> p = numbers_of(field(row, "p", where), where);
      if (p.size() != domain) throw ModelError(where + ": row length differs from the domain");
      const json given = row.contains("given") ? row.at("given") : json::array();
      if (!given.is_array() || given.size() != ps.size()) {
        throw ModelError(where + ": 'given' must list one value per parent");
      }
      std::size_t r = 0;
      for (std::size_t i = 0; i < ps.size(); ++i) {
        r = r * static_cast<std::size_t>(m.domain_of(ps[i])) +
            static_cast<std::size_t>(value_index(m, ps[i], given[i], where));
      }
      if (filled[r]) throw ModelError(where + ": parent assignment given twice");
      filled[r] = true;
      std::copy(p.begin(), p.end(), table.begin() + static_cast<std::ptrdiff_t>(r * domain));
    }
    for (std::size_t r = 0; r < row_count; ++r) {
      if (!filled[r]) throw ModelError(where + ": missing row for a parent assignment");
    }
    m.cpts[name] = std::move(table);
  }

  validate(m);
  return m;
}

DiscreteScm load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

std::string dump_model(const DiscreteScm& m) {
  json doc;
  doc["observed"] = json::array();
  for (const auto& o : m.observed) {
    json entry = {{"name", o.name}};
    if (o.labels.empty()) {
      entry["domain"] = o.domain;
    } else {
      entry["values"] = o.labels;
    }
    doc["observed"].push_back(entry);
  }
  VertexSet latent_names;
  if (!m.latents.empty()) {
    doc["latents"] = json::array();
    for (const auto& l : m.latents) {
      latent_names.insert(l.name);
      std::vector<VertexName> children;
      for (const auto& [child, ps] : m.parents) {
        if (std::find(ps.begin(), ps.end(), l.name) != ps.end()) children.push_back(child);
      }
      doc["latents"].push_back(
          {{"name", l.name}, {"marginal", l.marginal}, {"children", children}});
    }
  }
  doc["parents"] = json::object();
  for (const auto& [child, ps] : m.parents) {
    std::vector<VertexName> observed_parents;
    for (const auto& p : ps) {
      if (!latent_names.count(p)) observed_parents.push_back(p);
    }
    if (!observed_parents.empty()) doc["parents"][child] = observed_parents;
  }
  // Latents are re-appended after observed parents on load, so rows are
  // written in that order.
  doc["cpts"] = json::object();
  for (const auto& o : m.observed) {
    static const std::vector<VertexName> kNone;
    auto pit = m.parents.find(o.name);
    const auto& ps = pit == m.parents.end() ? kNone : pit->second;
    std::vector<VertexName> order;
    for (const auto& p : ps) {
      if (!latent_names.count(p)) order.push_back(p);
    }
    for (const auto& l : m.latents) {
      if (std::find(ps.begin(), ps.end(), l.name) != ps.end()) order.push_back(l.name);
    }
    std::vector<int> sizes;
    for (const auto& p : ps) sizes.push_back(m.domain_of(p));
    std::size_t rows = 1;
    for (int s : sizes) rows *= static_cast<std::size_t>(s);
    const auto& cpt = m.cpts.at(o.name);
    json out = json::array();
    for (std::size_t r = 0; r < rows; ++r) {
      std::map<VertexName, int> values;
      std::size_t rest = r;
      for (std::size_t i = ps.size(); i-- > 0;) {
        values[ps[i]] = static_cast<int>(rest % static_cast<std::size_t>(sizes[i]));
        rest /= static_cast<std::size_t>(sizes[i]);
      }
      json given = json::array();
      for (const auto& p : order) {
        if (latent_names.count(p)) {
          given.push_back(values[p]);
        } else {
          given.push_back(m.label(p, values[p]));
        }
      }
      std::vector<double> row(cpt.begin() + static_cast<std::ptrdiff_t>(r * o.domain),
                              cpt.begin() + static_cast<std::ptrdiff_t>((r + 1) * o.domain));
      out.push_back({{"given", given}, {"p", row}});
    }
    doc["cpts"][o.name] = out;
  }
  return doc.dump(2);
}

}  // namespace causalid
