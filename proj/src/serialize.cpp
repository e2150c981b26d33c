#include "causalid/serialize.hpp"

#include "causalid/errors.hpp"

namespace causalid {

namespace {

nlohmann::json set_json(const VertexSet& s) { return nlohmann::json(std::vector<VertexName>(s.begin(), s.end())); }

VertexSet set_from(const nlohmann::json& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw ParseError(std::string("expression node lacks array field '") + field + "'");
  }
  VertexSet out;
  for (const auto& v : j.at(field)) {
    if (!v.is_string()) throw ParseError(std::string("non-string entry in '") + field + "'");
    out.insert(v.get<std::string>());
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const Expression& e) {
  if (const auto* a = as_atom(e)) {
    return {{"kind", "atom"}, {"var", set_json(a->var)}, {"cond", set_json(a->cond)}};
  }
  if (const auto* p = as_product(e)) {
    auto children = nlohmann::json::array();
    for (const auto& c : p->children) children.push_back(to_json(c));
    return {{"kind", "product"}, {"children", children}};
  }
  if (const auto* m = as_marginal(e)) {
    return {{"kind", "marginal"}, {"sumset", set_json(m->sumset)}, {"body", to_json(m->body)}};
  }
  const auto* q = as_quotient(e);
  return {{"kind", "quotient"}, {"num", to_json(q->num)}, {"den", to_json(q->den)}};
}

Expression expression_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ParseError("expression node without a kind");
  }
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "atom") return make_atom(set_from(j, "var"), set_from(j, "cond"));
  if (kind == "product") {
    if (!j.contains("children") || !j.at("children").is_array() || j.at("children").size() < 2) {
      throw ParseError("product needs at least two children");
    }
    std::vector<Expression> children;
    for (const auto& c : j.at("children")) children.push_back(expression_from_json(c));
    return make_product(std::move(children));
  }
  if (kind == "marginal") {
    auto sumset = set_from(j, "sumset");
    if (sumset.empty()) throw ParseError("marginal with an empty sumset");
    if (!j.contains("body")) throw ParseError("marginal without a body");
    return make_marginal(std::move(sumset), expression_from_json(j.at("body")));
  }
  if (kind == "quotient") {
    if (!j.contains("num") || !j.contains("den")) throw ParseError("quotient lacks num or den");
    return make_quotient(expression_from_json(j.at("num")), expression_from_json(j.at("den")));
  }
  throw ParseError("unknown expression kind '" + kind + "'");
}

nlohmann::json to_json(const Admg& g) {
  auto directed = nlohmann::json::array();
  for (const auto& [tail, head] : g.directed()) directed.push_back({tail, head});
  auto bidirected = nlohmann::json::array();
  for (const auto& [a, b] : g.bidirected()) bidirected.push_back({a, b});
  return {{"vertices", g.topological_order()}, {"directed", directed}, {"bidirected", bidirected}};
}

nlohmann::json to_json(const HedgeWitness& w) {
  return {{"forest_f", to_json(w.forest_f)},
          {"forest_f_sub", to_json(w.forest_f_sub)},
          {"sub_x", set_json(w.sub_x)},
          {"sub_y", set_json(w.sub_y)}};
}

nlohmann::json to_json(const Trace& trace) {
  auto out = nlohmann::json::array();
  for (const auto& e : trace) {
    nlohmann::json entry = {{"depth", e.depth},
                            {"algorithm", e.algorithm == Algorithm::id ? "ID" : "IDC"},
                            {"line", e.line},
                            {"y", set_json(e.y)},
                            {"x", set_json(e.x)}};
    if (e.algorithm == Algorithm::idc) entry["z"] = set_json(e.z);
    out.push_back(entry);
  }
  return out;
}

}  // namespace causalid
