#include "attn/document.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace attn {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw DocumentError(path + ": " + msg); }

std::string join_path(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

const Json& member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

const Json* optional_member(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

unsigned as_nat(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
    fail(path, "expected a natural number");
  }
  const auto v = j.get<unsigned long long>();
  if (v > 1000000) fail(path, "number too large");
  return static_cast<unsigned>(v);
}

const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

const Json& as_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  const Json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_string(arr[i], index_path(path, i)));
  return out;
}

Formula formula_at(const Json& j, const Signature& sig, const std::string& path) {
  const std::string text = as_string(j, path);
  try {
    return parse_formula(text, sig);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

std::size_t name_index(const std::vector<std::string>& names, const std::string& name, const char* what,
                       const std::string& path) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  fail(path, std::string("unknown ") + what + " '" + name + "'");
}

std::size_t agent_at(const Signature& sig, const std::string& name, const std::string& path) {
  return name_index(sig.agents, name, "agent", path);
}

/// "total", "discrete", a list of blocks, or {"edges": [[u, v], ...]}.
Partition partition_at(const Json& j, const std::vector<std::string>& names, const char* what,
                       const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "total") return Partition::total(names.size());
    if (s == "discrete") return Partition::discrete(names.size());
    fail(path, "expected \"total\", \"discrete\", a list of blocks or an edge object");
  }
  if (j.is_object()) {
    const std::string epath = join_path(path, "edges");
    const Json& edges = as_array(member(j, "edges", path), epath);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string p = index_path(epath, k);
      const Json& e = as_array(edges[k], p);
      if (e.size() != 2) fail(p, "an edge has two ends");
      pairs.emplace_back(name_index(names, as_string(e[0], p), what, p), name_index(names, as_string(e[1], p), what, p));
    }
    return Partition::from_edges(names.size(), pairs);
  }
  const Json& arr = as_array(j, path);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t b = 0; b < arr.size(); ++b) {
    const std::string p = index_path(path, b);
    std::vector<std::size_t> block;
    for (const auto& name : string_list(arr[b], p)) block.push_back(name_index(names, name, what, p));
    blocks.push_back(std::move(block));
  }
  try {
    return Partition::from_blocks(names.size(), blocks);
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

/// One partition per agent; every agent must be listed.
std::vector<Partition> partitions_at(const Json& j, const Signature& sig, const std::vector<std::string>& names,
                                     const char* what, const std::string& path) {
  as_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) agent_at(sig, it.key(), path);
  std::vector<Partition> out;
  for (const auto& agent : sig.agents) {
    out.push_back(partition_at(member(j, agent.c_str(), path), names, what, join_path(path, agent)));
  }
  return out;
}

SignaturePtr signature_at(const Json& j, const std::string& path) {
  as_object(j, path);
  auto agents = string_list(member(j, "agents", path), join_path(path, "agents"));
  const unsigned bound = as_nat(member(j, "bound", path), join_path(path, "bound"));
  std::vector<std::string> atoms;
  if (const Json* a = optional_member(j, "atoms", path)) atoms = string_list(*a, join_path(path, "atoms"));
  try {
    return Signature::make(std::move(agents), bound, std::move(atoms));
  } catch (const ValidationError& e) {
    fail(path, e.what());
  }
}

AttentionState state_at(const Json& j, const SignaturePtr& sig, const std::string& path) {
  as_object(j, path);
  AttentionState s;
  s.sig = sig;
  const std::string wpath = join_path(path, "worlds");
  const Json& worlds = as_array(member(j, "worlds", path), wpath);
  if (worlds.empty()) fail(wpath, "a state needs at least one world");
  s.attention.assign(sig->agent_count(), std::vector<unsigned>(worlds.size(), 0));
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    const std::string p = index_path(wpath, w);
    const Json& world = as_object(worlds[w], p);
    const std::string name = as_string(member(world, "name", p), join_path(p, "name"));
    for (const auto& other : s.worlds) {
      if (other == name) fail(join_path(p, "name"), "duplicate world '" + name + "'");
    }
    s.worlds.push_back(name);
    std::vector<bool> row(sig->prop_count(), false);
    if (const Json* atoms = optional_member(world, "atoms", p)) {
      const std::string apath = join_path(p, "atoms");
      for (const auto& atom : string_list(*atoms, apath)) row[name_index(sig->atoms, atom, "atom", apath)] = true;
    }
    s.valuation.push_back(std::move(row));
    const std::string attpath = join_path(p, "attention");
    const Json& att = as_object(member(world, "attention", p), attpath);
    for (auto it = att.begin(); it != att.end(); ++it) agent_at(*sig, it.key(), attpath);
    for (std::size_t a = 0; a < sig->agent_count(); ++a) {
      const std::string vpath = join_path(attpath, sig->agents[a]);
      const unsigned v = as_nat(member(att, sig->agents[a].c_str(), attpath), vpath);
      if (v > sig->attention_bound) {
        fail(vpath, "attention " + std::to_string(v) + " exceeds bound " + std::to_string(sig->attention_bound));
      }
      s.attention[a][w] = v;
    }
  }
  s.relations = partitions_at(member(j, "relations", path), *sig, s.worlds, "world", join_path(path, "relations"));
  const std::string actual = as_string(member(j, "actual", path), join_path(path, "actual"));
  s.actual = name_index(s.worlds, actual, "world", join_path(path, "actual"));
  auto d = validate_state(s);
  if (!d.empty()) fail(path, d.front());
  return s;
}

ActionModelPtr model_at(const Json& j, const SignaturePtr& sig, const std::string& path) {
  as_object(j, path);
  auto m = std::make_shared<AttentionActionModel>();
  m->sig = sig;
  const std::string epath = join_path(path, "events");
  const Json& events = as_array(member(j, "events", path), epath);
  if (events.empty()) fail(epath, "a model needs at least one event");
  for (std::size_t e = 0; e < events.size(); ++e) {
    const std::string p = index_path(epath, e);
    const std::string name = as_string(member(events[e], "name", p), join_path(p, "name"));
    for (const auto& other : m->events) {
      if (other == name) fail(join_path(p, "name"), "duplicate event '" + name + "'");
    }
    m->events.push_back(name);
    m->pre.push_back(formula_at(member(events[e], "pre", p), *sig, join_path(p, "pre")));
  }
  m->q = partitions_at(member(j, "q", path), *sig, m->events, "event", join_path(path, "q"));
  m->qstar = partitions_at(member(j, "qstar", path), *sig, m->events, "event", join_path(path, "qstar"));

  CostTable& c = m->costs;
  c.entries.resize(sig->agent_count());
  c.agent_default.resize(sig->agent_count());
  const auto comps = m->components();
  if (const Json* costs = optional_member(j, "costs", path)) {
    const std::string cpath = join_path(path, "costs");
    as_object(*costs, cpath);
    if (const Json* d = optional_member(*costs, "default", cpath)) c.default_cost = as_nat(*d, join_path(cpath, "default"));
    if (const Json* agents = optional_member(*costs, "agents", cpath)) {
      const std::string apath = join_path(cpath, "agents");
      as_object(*agents, apath);
      for (auto it = agents->begin(); it != agents->end(); ++it) {
        const std::string p = join_path(apath, it.key());
        const std::size_t a = agent_at(*sig, it.key(), apath);
        as_object(*it, p);
        if (const Json* d = optional_member(*it, "default", p)) c.agent_default[a] = as_nat(*d, join_path(p, "default"));
        const Json* entries = optional_member(*it, "entries", p);
        if (!entries) continue;
        const std::string enpath = join_path(p, "entries");
        as_array(*entries, enpath);
        for (std::size_t k = 0; k < entries->size(); ++k) {
          const std::string ep = index_path(enpath, k);
          const Json& entry = as_object((*entries)[k], ep);
          CostEntry ce;
          ce.question = formula_at(member(entry, "question", ep), *sig, join_path(ep, "question"));
          ce.cost = as_nat(member(entry, "cost", ep), join_path(ep, "cost"));
          if (const Json* ev = optional_member(entry, "event", ep)) {
            const std::string evp = join_path(ep, "event");
            ce.component = comps[a].block_of(name_index(m->events, as_string(*ev, evp), "event", evp));
          } else if (const Json* comp = optional_member(entry, "component", ep)) {
            const std::string cp = join_path(ep, "component");
            ce.component = as_nat(*comp, cp);
            if (*ce.component >= comps[a].block_count()) fail(cp, "no such component");
          }
          c.entries[a].push_back(std::move(ce));
        }
      }
    }
  }
  return m;
}

AttentionAction action_at(const Json& j, const std::string& name, const std::map<std::string, ActionModelPtr>& models,
                          const SignaturePtr& sig, const std::string& path) {
  as_object(j, path);
  AttentionAction x;
  x.name = name;
  const std::string mpath = join_path(path, "model");
  const std::string model = as_string(member(j, "model", path), mpath);
  auto it = models.find(model);
  if (it == models.end()) fail(mpath, "unknown model '" + model + "'");
  x.model = it->second;
  x.questions.assign(sig->agent_count(), Formula::top());
  if (const Json* qs = optional_member(j, "questions", path)) {
    const std::string qpath = join_path(path, "questions");
    as_object(*qs, qpath);
    for (auto q = qs->begin(); q != qs->end(); ++q) {
      const std::size_t a = agent_at(*sig, q.key(), qpath);
      x.questions[a] = formula_at(*q, *sig, join_path(qpath, q.key()));
    }
  }
  const std::string apath = join_path(path, "actual");
  x.actual = name_index(x.model->events, as_string(member(j, "actual", path), apath), "event", apath);
  auto d = validate_action(x);
  if (!d.ok()) fail(path, d.errors.front());
  return x;
}

EventRelation relation_at(const Json& j, const std::vector<std::string>& events, const std::string& path) {
  if (j.is_object() && j.contains("pairs")) {
    const std::string ppath = join_path(path, "pairs");
    const Json& pairs = as_array(j["pairs"], ppath);
    EventRelation r(events.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const std::string p = index_path(ppath, k);
      const Json& e = as_array(pairs[k], p);
      if (e.size() != 2) fail(p, "a pair has two events");
      r.set(name_index(events, as_string(e[0], p), "event", p), name_index(events, as_string(e[1], p), "event", p));
    }
    return r;
  }
  return EventRelation::from_partition(partition_at(j, events, "event", path));
}

EpistemicAction epistemic_at(const Json& j, const std::string& name, const SignaturePtr& sig,
                             const std::string& path) {
  as_object(j, path);
  EpistemicAction y;
  y.sig = sig;
  y.name = name;
  const std::string epath = join_path(path, "events");
  const Json& events = as_array(member(j, "events", path), epath);
  if (events.empty()) fail(epath, "an action needs at least one event");
  for (std::size_t e = 0; e < events.size(); ++e) {
    const std::string p = index_path(epath, e);
    y.events.push_back(as_string(member(events[e], "name", p), join_path(p, "name")));
    y.pre.push_back(formula_at(member(events[e], "pre", p), *sig, join_path(p, "pre")));
    std::vector<std::pair<Formula, Formula>> post;
    if (const Json* pm = optional_member(events[e], "post", p)) {
      const std::string pp = join_path(p, "post");
      as_object(*pm, pp);
      for (auto it = pm->begin(); it != pm->end(); ++it) {
        const std::string kp = join_path(pp, it.key());
        Formula atom;
        try {
          atom = parse_formula(it.key(), *sig);
          atom_slot(*sig, atom);
        } catch (const Error& err) {
          fail(kp, err.what());
        }
        post.emplace_back(atom, formula_at(*it, *sig, kp));
      }
    }
    y.post.push_back(std::move(post));
  }
  const std::string rpath = join_path(path, "relations");
  const Json& rels = as_object(member(j, "relations", path), rpath);
  for (auto it = rels.begin(); it != rels.end(); ++it) agent_at(*sig, it.key(), rpath);
  for (const auto& agent : sig->agents) {
    y.relations.push_back(relation_at(member(rels, agent.c_str(), rpath), y.events, join_path(rpath, agent)));
  }
  const std::string apath = join_path(path, "actual");
  const Json& actual = member(j, "actual", path);
  const auto names = actual.is_string() ? std::vector<std::string>{actual.get<std::string>()} : string_list(actual, apath);
  for (const auto& n : names) y.actual.push_back(name_index(y.events, n, "event", apath));
  auto d = validate_action(y);
  if (!d.ok()) fail(path, d.errors.front());
  return y;
}

template <class T, class Fn>
void read_section(const Json& root, const char* key, std::map<std::string, T>& out, Fn read) {
  const Json* sec = optional_member(root, key, "document");
  if (!sec) return;
  as_object(*sec, key);
  for (auto it = sec->begin(); it != sec->end(); ++it) {
    out.emplace(it.key(), read(*it, it.key(), join_path(key, it.key())));
  }
}

}  // namespace

const AttentionState& TaskDocument::state(const std::string& name) const {
  auto it = states.find(name);
  if (it == states.end()) throw DocumentError("unknown state '" + name + "'");
  return it->second;
}

const AttentionAction& TaskDocument::action(const std::string& name) const {
  auto it = actions.find(name);
  if (it == actions.end()) throw DocumentError("unknown action '" + name + "'");
  return it->second;
}

const EpistemicAction& TaskDocument::epistemic_action(const std::string& name) const {
  auto it = epistemic_actions.find(name);
  if (it == epistemic_actions.end()) throw DocumentError("unknown epistemic action '" + name + "'");
  return it->second;
}

PlanningTask TaskDocument::task(const std::string& name) const {
  auto it = tasks.find(name);
  if (it == tasks.end()) throw DocumentError("unknown task '" + name + "'");
  PlanningTask t;
  t.initial = state(it->second.initial);
  for (const auto& a : it->second.actions) t.actions.push_back(action(a));
  t.goal = it->second.goal;
  return t;
}

TaskDocument parse_document(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DocumentError(std::string("document: JSON syntax error at byte ") + std::to_string(e.byte));
  }
  as_object(root, "document");
  TaskDocument doc;
  doc.sig = signature_at(member(root, "signature", "document"), "signature");
  const SignaturePtr& sig = doc.sig;
  read_section(root, "states", doc.states,
               [&](const Json& j, const std::string&, const std::string& p) { return state_at(j, sig, p); });
  read_section(root, "models", doc.models,
               [&](const Json& j, const std::string&, const std::string& p) { return model_at(j, sig, p); });
  read_section(root, "actions", doc.actions, [&](const Json& j, const std::string& n, const std::string& p) {
    return action_at(j, n, doc.models, sig, p);
  });
  read_section(root, "epistemic_actions", doc.epistemic_actions,
               [&](const Json& j, const std::string& n, const std::string& p) { return epistemic_at(j, n, sig, p); });
  read_section(root, "tasks", doc.tasks, [&](const Json& j, const std::string&, const std::string& p) {
    TaskSpec t;
    const std::string ip = join_path(p, "initial");
    t.initial = as_string(member(j, "initial", p), ip);
    if (!doc.states.count(t.initial)) fail(ip, "unknown state '" + t.initial + "'");
    const std::string ap = join_path(p, "actions");
    t.actions = string_list(member(j, "actions", p), ap);
    for (const auto& a : t.actions) {
      if (!doc.actions.count(a)) fail(ap, "unknown action '" + a + "'");
    }
    t.goal = formula_at(member(j, "goal", p), *sig, join_path(p, "goal"));
    return t;
  });
  return doc;
}

TaskDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_document(buf.str());
  } catch (const DocumentError& e) {
    throw DocumentError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

Json blocks_json(const Partition& p, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (const auto& block : p.blocks()) {
    Json b = Json::array();
    for (std::size_t x : block) b.push_back(names[x]);
    out.push_back(std::move(b));
  }
  return out;
}

Json state_json(const AttentionState& s) {
  const Signature& sig = *s.sig;
  Json worlds = Json::array();
  for (std::size_t w = 0; w < s.world_count(); ++w) {
    Json atoms = Json::array();
    for (std::size_t p = 0; p < sig.prop_count(); ++p) {
      if (s.valuation[w][p]) atoms.push_back(sig.atoms[p]);
    }
    Json att = Json::object();
    for (std::size_t a = 0; a < sig.agent_count(); ++a) att[sig.agents[a]] = s.attention[a][w];
    worlds.push_back({{"name", s.worlds[w]}, {"atoms", std::move(atoms)}, {"attention", std::move(att)}});
  }
  Json rel = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) rel[sig.agents[a]] = blocks_json(s.relations[a], s.worlds);
  return {{"worlds", std::move(worlds)}, {"relations", std::move(rel)}, {"actual", s.worlds[s.actual]}};
}

Json model_json(const AttentionActionModel& m) {
  const Signature& sig = *m.sig;
  Json events = Json::array();
  for (std::size_t e = 0; e < m.events.size(); ++e) events.push_back({{"name", m.events[e]}, {"pre", to_string(m.pre[e])}});
  Json q = Json::object();
  Json qstar = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    q[sig.agents[a]] = blocks_json(m.q[a], m.events);
    qstar[sig.agents[a]] = blocks_json(m.qstar[a], m.events);
  }
  Json costs = Json::object();
  if (m.costs.default_cost) costs["default"] = *m.costs.default_cost;
  Json agents = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    Json entry = Json::object();
    if (a < m.costs.agent_default.size() && m.costs.agent_default[a]) entry["default"] = *m.costs.agent_default[a];
    if (a < m.costs.entries.size() && !m.costs.entries[a].empty()) {
      Json list = Json::array();
      for (const auto& ce : m.costs.entries[a]) {
        Json item = {{"question", to_string(ce.question)}, {"cost", ce.cost}};
        if (ce.component) item["component"] = *ce.component;
        list.push_back(std::move(item));
      }
      entry["entries"] = std::move(list);
    }
    if (!entry.empty()) agents[sig.agents[a]] = std::move(entry);
  }
  if (!agents.empty()) costs["agents"] = std::move(agents);
  return {{"events", std::move(events)}, {"q", std::move(q)}, {"qstar", std::move(qstar)}, {"costs", std::move(costs)}};
}

Json action_json(const AttentionAction& x, const std::string& model) {
  const Signature& sig = *x.model->sig;
  Json qs = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) qs[sig.agents[a]] = to_string(x.questions[a]);
  return {{"model", model}, {"questions", std::move(qs)}, {"actual", x.model->events[x.actual]}};
}

Json epistemic_json(const EpistemicAction& y) {
  const Signature& sig = *y.sig;
  Json events = Json::array();
  for (std::size_t e = 0; e < y.events.size(); ++e) {
    Json post = Json::object();
    for (const auto& [atom, value] : y.post[e]) post[to_string(atom)] = to_string(value);
    Json ev = {{"name", y.events[e]}, {"pre", to_string(y.pre[e])}};
    if (!post.empty()) ev["post"] = std::move(post);
    events.push_back(std::move(ev));
  }
  Json rels = Json::object();
  for (std::size_t a = 0; a < sig.agent_count(); ++a) {
    if (auto p = y.relations[a].as_partition()) {
      rels[sig.agents[a]] = blocks_json(*p, y.events);
      continue;
    }
    Json pairs = Json::array();
    for (std::size_t u = 0; u < y.events.size(); ++u) {
      for (std::size_t v = 0; v < y.events.size(); ++v) {
        if (y.relations[a].related(u, v)) pairs.push_back({y.events[u], y.events[v]});
      }
    }
    rels[sig.agents[a]] = {{"pairs", std::move(pairs)}};
  }
  Json actual = Json::array();
  for (std::size_t e : y.actual) actual.push_back(y.events[e]);
  return {{"events", std::move(events)}, {"relations", std::move(rels)}, {"actual", std::move(actual)}};
}

}  // namespace

std::string emit_document(const TaskDocument& doc) {
  const Signature& sig = *doc.sig;
  Json root = Json::object();
  root["signature"] = {{"agents", sig.agents}, {"bound", sig.attention_bound}, {"atoms", sig.atoms}};
  if (!doc.states.empty()) {
    Json states = Json::object();
    for (const auto& [name, s] : doc.states) states[name] = state_json(s);
    root["states"] = std::move(states);
  }
  Json models = Json::object();
  for (const auto& [name, m] : doc.models) models[name] = model_json(*m);
  Json actions = Json::object();
  for (const auto& [name, x] : doc.actions) {
    std::string model;
    for (const auto& [mname, m] : doc.models) {
      if (m == x.model) model = mname;
    }
    if (model.empty()) {
      model = name + "_model";
      models[model] = model_json(*x.model);
    }
    actions[name] = action_json(x, model);
  }
  if (!models.empty()) root["models"] = std::move(models);
  if (!actions.empty()) root["actions"] = std::move(actions);
  if (!doc.epistemic_actions.empty()) {
    Json ys = Json::object();
    for (const auto& [name, y] : doc.epistemic_actions) ys[name] = epistemic_json(y);
    root["epistemic_actions"] = std::move(ys);
  }
  if (!doc.tasks.empty()) {
    Json tasks = Json::object();
    for (const auto& [name, t] : doc.tasks) {
      tasks[name] = {{"initial", t.initial}, {"actions", t.actions}, {"goal", to_string(t.goal)}};
    }
    root["tasks"] = std::move(tasks);
  }
  return root.dump(2) + "\n";
}

TaskDocument document_with_state(const std::string& name, const AttentionState& s) {
  TaskDocument doc;
  doc.sig = s.sig;
  doc.states.emplace(name, s);
  return doc;
}

TaskDocument document_with_action(const AttentionAction& x) {
  TaskDocument doc;
  doc.sig = x.model->sig;
  doc.actions.emplace(x.name, x);
  return doc;
}

TaskDocument document_with_epistemic_action(const EpistemicAction& y) {
  TaskDocument doc;
  doc.sig = y.sig;
  doc.epistemic_actions.emplace(y.name, y);
  return doc;
}

}  // namespace attn
