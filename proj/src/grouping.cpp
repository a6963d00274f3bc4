#include "goldrec/grouping.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace goldrec {

Structure structure_of(TextView s) {
  Structure st;
  std::optional<CharClass> last;
  for (char32_t c : s) {
    const CharClass cls = classify(c);
    if (cls == CharClass::Other) {
      st.terms.push_back(Term::single(c));
      last.reset();
      continue;
    }
    if (last == cls) continue;
    st.terms.push_back(*regex_term_for(cls));
    last = cls;
  }
  return st;
}

std::string structure_text(const Structure& st) {
  std::string out;
  for (std::size_t k = 0; k < st.terms.size(); ++k) {
    if (k > 0) out += ' ';
    out += canonical_text(st.terms[k]);
  }
  return out;
}

namespace {

std::string signature_of(const ReplacementInput& r) {
  return structure_text(structure_of(r.lhs)) + " -> " + structure_text(structure_of(r.rhs));
}

std::vector<Text> distinct_values(std::span<const ReplacementInput> items,
                                  std::span<const std::size_t> which) {
  std::vector<Text> values;
  for (std::size_t k : which) {
    values.push_back(items[k].lhs);
    values.push_back(items[k].rhs);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::vector<Text> all_values(std::span<const ReplacementInput> items) {
  std::vector<std::size_t> every(items.size());
  for (std::size_t k = 0; k < items.size(); ++k) every[k] = k;
  return distinct_values(items, every);
}

Program program_of(const std::vector<LabelId>& labels, const Vocabulary& vocab) {
  Program p;
  for (LabelId f : labels) p.functions.push_back(vocab.function(f));
  return p;
}

void sort_groups(std::vector<Group>& groups) {
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.key() < b.key();
  });
}

Group constant_group(const ReplacementInput& r) {
  Group g;
  g.structure = "~" + std::to_string(r.key);
  g.pivot.functions.push_back(StringFunction::constant(r.rhs));
  g.pivot_text = canonical_text(g.pivot);
  g.members = {r.key};
  return g;
}

// Exact members of a program: graphs of the index where the label chain
// runs from node 1 to the sink.
std::vector<std::uint32_t> program_members(const std::vector<LabelId>& labels,
                                           std::span<const TransformationGraph> graphs,
                                           const InvertedIndex& index) {
  EntryList l;
  for (std::uint32_t h : index.graphs()) l.push_back({h, 1, 1});
  for (LabelId f : labels) l = intersect(l, index.list(f));
  std::vector<std::uint32_t> out;
  for (const auto& e : l) {
    if (e.j == graphs[e.graph].sink() && (out.empty() || out.back() != e.graph)) out.push_back(e.graph);
  }
  return out;
}

void group_partition(std::span<const ReplacementInput> items, std::span<const std::size_t> part,
                     const std::string& signature, const FrequencyTable& global,
                     const GroupingConfig& config, std::vector<Group>& out) {
  std::vector<std::size_t> members;
  for (std::size_t k : part) {
    const auto& r = items[k];
    if (r.lhs.size() > config.max_value_len || r.rhs.size() > config.max_value_len) {
      out.push_back(constant_group(r));
    } else {
      members.push_back(k);
    }
  }
  if (members.empty()) return;

  Vocabulary vocab;
  FrequencyTable local(distinct_values(items, members), config.max_constant_len);
  const ConstantScorer scorer = config.score_constants
                                    ? ConstantScorer(&local, &global, config.constant_score_exponent)
                                    : ConstantScorer::keep_all();
  std::vector<TransformationGraph> graphs;
  graphs.reserve(members.size());
  std::vector<std::uint32_t> ids(members.size());
  for (std::size_t k = 0; k < members.size(); ++k) {
    graphs.push_back(build_graph(items[members[k]].lhs, items[members[k]].rhs, scorer, vocab));
    ids[k] = static_cast<std::uint32_t>(k);
  }
  const InvertedIndex index(graphs, ids);
  const SearchOptions opts{config.max_path_len, config.early_termination};
  std::vector<std::uint32_t> lower(graphs.size(), 1);
  std::vector<std::optional<std::vector<LabelId>>> pivot_of(graphs.size());

  if (config.sample_threshold > 0 && graphs.size() > config.sample_threshold) {
    // Pivots are learned on a sample, then every graph joins the best
    // supported sampled pivot it contains.
    std::vector<std::uint32_t> sample;
    std::mt19937_64 rng(config.seed);
    std::sample(ids.begin(), ids.end(), std::back_inserter(sample),
                std::min(config.sample_size, ids.size()), rng);
    const InvertedIndex sample_index(graphs, sample);
    std::vector<std::uint32_t> sample_lower(graphs.size(), 1);
    std::map<std::vector<LabelId>, std::vector<std::uint32_t>> exact;
    for (std::uint32_t k : sample) {
      auto p = search_pivot(k, graphs, sample_index, vocab, 0, sample_lower, opts);
      if (p && !exact.count(p->labels)) exact[p->labels] = program_members(p->labels, graphs, index);
    }
    std::vector<std::pair<std::vector<LabelId>, std::vector<std::uint32_t>>> ranked(exact.begin(), exact.end());
    std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
      return canonical_text(program_of(a.first, vocab)) < canonical_text(program_of(b.first, vocab));
    });
    for (const auto& [labels, who] : ranked) {
      for (std::uint32_t k : who) {
        if (!pivot_of[k]) pivot_of[k] = labels;
      }
    }
  }

  for (std::uint32_t k = 0; k < graphs.size(); ++k) {
    if (pivot_of[k]) continue;
    auto p = search_pivot(k, graphs, index, vocab, 0, lower, opts);
    if (!p) throw std::logic_error("graph without a transformation path");
    pivot_of[k] = std::move(p->labels);
  }

  std::map<std::string, Group> by_pivot;
  for (std::uint32_t k = 0; k < graphs.size(); ++k) {
    Program program = program_of(*pivot_of[k], vocab);
    std::string text = canonical_text(program);
    auto [it, inserted] = by_pivot.try_emplace(text);
    if (inserted) {
      it->second.structure = signature;
      it->second.pivot = std::move(program);
      it->second.pivot_text = text;
    }
    it->second.members.push_back(items[members[k]].key);
  }
  for (auto& [text, group] : by_pivot) {
    std::sort(group.members.begin(), group.members.end());
    out.push_back(std::move(group));
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> structure_partition(std::span<const ReplacementInput> items) {
  std::vector<std::vector<std::size_t>> parts;
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t k = 0; k < items.size(); ++k) {
    auto [it, inserted] = where.try_emplace(signature_of(items[k]), parts.size());
    if (inserted) parts.emplace_back();
    parts[it->second].push_back(k);
  }
  return parts;
}

std::vector<Group> one_shot_grouping(std::span<const ReplacementInput> items,
                                     const GroupingConfig& config) {
  for (const auto& r : items) {
    if (r.rhs.empty()) throw std::invalid_argument("replacement with an empty right-hand side");
  }
  const FrequencyTable global(all_values(items), config.max_constant_len);
  std::vector<Group> out;
  if (config.structure_refinement) {
    for (const auto& part : structure_partition(items)) {
      group_partition(items, part, signature_of(items[part.front()]), global, config, out);
    }
  } else {
    std::vector<std::size_t> every(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) every[k] = k;
    group_partition(items, every, "*", global, config, out);
  }
  sort_groups(out);
  return out;
}

// ---- GroupingState -------------------------------------------------------

GroupingState::GroupingState(std::span<const ReplacementInput> items, GroupingConfig config)
    : config_(config), global_(all_values(items), config.max_constant_len) {
  for (const auto& r : items) {
    if (slot_of_.count(r.key)) throw std::invalid_argument("duplicate replacement key");
    add_slot(r);
  }
  for (std::uint32_t c = 0; c < clusters_.size(); ++c) push_placeholder(c);
}

std::uint32_t GroupingState::cluster_for(const ReplacementInput& item) {
  std::string sig;
  if (item.lhs.size() > config_.max_value_len || item.rhs.size() > config_.max_value_len) {
    sig = "~" + std::to_string(item.key);
  } else {
    sig = config_.structure_refinement ? signature_of(item) : "*";
  }
  auto [it, inserted] = cluster_ids_.try_emplace(sig, static_cast<std::uint32_t>(clusters_.size()));
  if (inserted) {
    clusters_.emplace_back();
    clusters_.back().signature = sig;
  }
  return it->second;
}

std::uint32_t GroupingState::add_slot(const ReplacementInput& item) {
  if (item.rhs.empty()) throw std::invalid_argument("replacement with an empty right-hand side");
  const auto id = static_cast<std::uint32_t>(slots_.size());
  Slot slot;
  slot.item = item;
  slot.cluster = cluster_for(item);
  slot.alive = true;
  slot.oversize = clusters_[slot.cluster].signature.front() == '~';
  slots_.push_back(std::move(slot));
  graphs_.emplace_back();
  lower_.push_back(1);
  slot_of_[item.key] = id;
  clusters_[slots_[id].cluster].members.push_back(id);
  ++live_;
  return id;
}

std::uint32_t GroupingState::live_size(const Cluster& c) const {
  std::uint32_t n = 0;
  for (std::uint32_t s : c.members) n += slots_[s].alive;
  return n;
}

void GroupingState::push_placeholder(std::uint32_t c) {
  const auto& cluster = clusters_[c];
  std::uint32_t first = UINT32_MAX;
  for (std::uint32_t s : cluster.members) {
    if (slots_[s].alive) {
      first = s;
      break;
    }
  }
  if (first == UINT32_MAX) return;
  heap_.push({live_size(cluster), first, true, c, cluster.gen});
}

void GroupingState::materialize(std::uint32_t c) {
  auto& cluster = clusters_[c];
  if (cluster.materialized) return;
  cluster.materialized = true;
  ++cluster.gen;
  std::vector<std::uint32_t> alive;
  for (std::uint32_t s : cluster.members) {
    if (slots_[s].alive) alive.push_back(s);
  }
  if (alive.empty()) return;
  if (slots_[alive.front()].oversize) {
    for (std::uint32_t s : alive) {
      slots_[s].upper = 1;
      heap_.push({1, s, false, s, ++slots_[s].gen});
    }
    return;
  }
  std::vector<Text> values;
  for (std::uint32_t s : alive) {
    values.push_back(slots_[s].item.lhs);
    values.push_back(slots_[s].item.rhs);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const FrequencyTable local(values, config_.max_constant_len);
  const ConstantScorer scorer = config_.score_constants
                                    ? ConstantScorer(&local, &global_, config_.constant_score_exponent)
                                    : ConstantScorer::keep_all();
  cluster.vocab = Vocabulary();
  for (std::uint32_t s : alive) {
    graphs_[s] = build_graph(slots_[s].item.lhs, slots_[s].item.rhs, scorer, cluster.vocab);
    slots_[s].built = true;
  }
  cluster.index = InvertedIndex(graphs_, alive);
  for (std::uint32_t s : alive) {
    slots_[s].upper = initial_upper_bound(graphs_[s], cluster.index);
    lower_[s] = 1;
    heap_.push({slots_[s].upper, s, false, s, ++slots_[s].gen});
  }
}

void GroupingState::dematerialize(std::uint32_t c) {
  auto& cluster = clusters_[c];
  ++cluster.gen;
  if (cluster.materialized) {
    cluster.materialized = false;
    cluster.vocab = Vocabulary();
    cluster.index = InvertedIndex();
    for (std::uint32_t s : cluster.members) {
      slots_[s].built = false;
      ++slots_[s].gen;
      graphs_[s] = TransformationGraph();
    }
  }
  push_placeholder(c);
}

bool GroupingState::valid(const HeapItem& h) const {
  if (h.placeholder) {
    const auto& cluster = clusters_[h.target];
    return !cluster.materialized && cluster.gen == h.gen;
  }
  const auto& slot = slots_[h.target];
  return slot.alive && slot.gen == h.gen && (slot.built || slot.oversize);
}

Group GroupingState::make_group(std::uint32_t c, const std::vector<LabelId>& labels,
                                const std::vector<std::uint32_t>& members) const {
  Group g;
  g.structure = clusters_[c].signature;
  g.pivot = program_of(labels, clusters_[c].vocab);
  g.pivot_text = canonical_text(g.pivot);
  for (std::uint32_t s : members) g.members.push_back(slots_[s].item.key);
  std::sort(g.members.begin(), g.members.end());
  return g;
}

void GroupingState::emit(const std::vector<std::uint32_t>& members) {
  if (members.empty()) return;
  const std::uint32_t c = slots_[members.front()].cluster;
  std::vector<std::uint32_t> built;
  for (std::uint32_t s : members) {
    slots_[s].alive = false;
    --live_;
    if (slots_[s].built) built.push_back(s);
    slots_[s].built = false;
    graphs_[s] = TransformationGraph();
  }
  clusters_[c].index.remove(built);
  // Shrunken lists leave upper bounds valid but lower bounds may overshoot.
  std::fill(lower_.begin(), lower_.end(), 1);
}

std::optional<Group> GroupingState::next_largest_group() {
  last_searched_.clear();
  if (exhausted_ || live_ == 0) return std::nullopt;

  std::uint32_t tau = 1;
  for (std::uint32_t s = 0; s < slots_.size(); ++s) {
    if (slots_[s].alive) tau = std::max(tau, lower_[s]);
  }
  const SearchOptions opts{config_.max_path_len, config_.early_termination};
  std::optional<std::uint32_t> best_slot;
  std::optional<Pivot> best;

  while (!heap_.empty()) {
    const HeapItem top = heap_.top();
    if (!valid(top)) {
      heap_.pop();
      continue;
    }
    if (tau >= top.upper) break;
    heap_.pop();
    if (top.placeholder) {
      materialize(top.target);
      continue;
    }
    const std::uint32_t s = top.target;
    last_searched_.push_back(slots_[s].item.key);
    const auto& cluster = clusters_[slots_[s].cluster];
    auto found = search_pivot(s, graphs_, cluster.index, cluster.vocab, tau, lower_, opts);
    if (found) {
      const auto support = static_cast<std::uint32_t>(found->members.size());
      lower_[s] = support;
      slots_[s].upper = support;
      tau = support;
      best_slot = s;
      best = std::move(found);
    } else {
      slots_[s].upper = tau;
    }
    heap_.push({slots_[s].upper, s, false, s, ++slots_[s].gen});
  }

  Group group;
  std::vector<std::uint32_t> members;
  if (best) {
    group = make_group(slots_[*best_slot].cluster, best->labels, best->members);
    members = best->members;
  } else {
    // Nothing beats tau, so some graph whose lower bound is tau carries a
    // group of exactly that size.
    std::optional<std::uint32_t> pick;
    for (std::uint32_t s = 0; s < slots_.size() && !pick; ++s) {
      if (slots_[s].alive && lower_[s] == tau) pick = s;
    }
    if (!pick) throw std::logic_error("no graph attains the largest lower bound");
    const std::uint32_t s = *pick;
    if (slots_[s].oversize) {
      group = constant_group(slots_[s].item);
      members = {s};
    } else {
      const std::uint32_t c = slots_[s].cluster;
      materialize(c);
      auto p = search_pivot(s, graphs_, clusters_[c].index, clusters_[c].vocab, tau - 1, lower_, opts);
      if (!p) throw std::logic_error("lower bound not attained");
      group = make_group(c, p->labels, p->members);
      members = p->members;
    }
  }

  if (group.size() < config_.min_group_size) {
    exhausted_ = true;
    return std::nullopt;
  }
  emit(members);
  return group;
}

void GroupingState::remove(std::uint64_t key) {
  auto it = slot_of_.find(key);
  if (it == slot_of_.end()) return;
  const std::uint32_t s = it->second;
  if (!slots_[s].alive) return;
  emit({s});
}

void GroupingState::add(const ReplacementInput& item) {
  auto it = slot_of_.find(item.key);
  if (it != slot_of_.end() && slots_[it->second].alive) return;
  const std::uint32_t s = add_slot(item);
  exhausted_ = false;
  dematerialize(slots_[s].cluster);
}

bool GroupingState::contains(std::uint64_t key) const {
  auto it = slot_of_.find(key);
  return it != slot_of_.end() && slots_[it->second].alive;
}

std::optional<GroupingState::Bounds> GroupingState::bounds(std::uint64_t key) const {
  auto it = slot_of_.find(key);
  if (it == slot_of_.end() || !slots_[it->second].alive) return std::nullopt;
  const auto& slot = slots_[it->second];
  const auto& cluster = clusters_[slot.cluster];
  const std::uint32_t upper = cluster.materialized ? slot.upper : live_size(cluster);
  return Bounds{lower_[it->second], upper};
}

void GroupingState::materialize_all() {
  for (std::uint32_t c = 0; c < clusters_.size(); ++c) {
    if (!clusters_[c].materialized && live_size(clusters_[c]) > 0) materialize(c);
  }
}

std::size_t GroupingState::materialized_groups() const {
  return static_cast<std::size_t>(
      std::count_if(clusters_.begin(), clusters_.end(), [](const Cluster& c) { return c.materialized; }));
}

}  // namespace goldrec
