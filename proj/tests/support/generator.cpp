#include "generator.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace carmc::testing {

namespace {

const char* const kProcessIds[] = {"ALPHA", "BETA", "GAMMA"};
const char* const kFieldWords[] = {"Amount", "Label", "Start date", "Code", "Notes",
                                   "Total price", "Visit time", "Weight", "Title"};
const BasicDomain kDomains[] = {BasicDomain::number, BasicDomain::text, BasicDomain::date,
                                BasicDomain::time, BasicDomain::money};

class Generator {
 public:
  Generator(std::uint32_t seed, const GeneratorLimits& limits)
      : rng_(seed), limits_(limits) {}

  RequirementsModel run() {
    RequirementsModel m;
    const int n_proc = pick(1, limits_.max_processes);
    const int n_events = pick(1, limits_.max_events);
    for (int p = 0; p < n_proc; ++p) {
      BusinessProcess proc;
      proc.id = kProcessIds[p];
      proc.name = std::string("Process ") + kProcessIds[p];
      m.processes.push_back(std::move(proc));
    }
    std::vector<int> counter(n_proc, 0);
    for (int i = 0; i < n_events; ++i) {
      const int p = i < n_proc ? i : pick(0, n_proc - 1);
      const std::string id = m.processes[p].id + " " + std::to_string(++counter[p]);
      ids_.push_back(id);
      owner_.push_back(p);
      build_event(m, i);
    }
    for (auto& proc : m.processes) {
      bool start_edge = false;
      for (const auto& pr : proc.precedences) start_edge |= pr.from_start();
      proc.has_start_node = start_edge || coin(0.3);
    }
    m.business_objects = objects_;
    maybe_annotate(m);
    return m;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <typename T, std::size_t N>
  const T& any(const T (&arr)[N]) {
    return arr[pick(0, N - 1)];
  }

  std::string field_name() {
    return std::string(any(kFieldWords)) + " " + std::to_string(++field_counter_);
  }

  Member data_field() {
    DataField f;
    f.name = field_name();
    f.domain = any(kDomains);
    f.op = coin(0.2) ? "g" : (coin(0.6) ? "i" : "");
    f.example = coin(0.5) ? "x" + std::to_string(pick(1, 999)) : "";
    return Member{f};
  }

  Member reference(const std::string& object, bool marked) {
    ReferenceField r;
    r.name = marked ? "Target " + std::to_string(++field_counter_) : field_name();
    r.op = "i";
    r.domain = object;
    r.example = coin(0.5) ? "ref" : "";
    r.extends_business_object = marked;
    return Member{r};
  }

  void add_edge(RequirementsModel& m, const std::string& from, int to, MergeKind merge,
                bool loopback = false) {
    m.processes[owner_[to]].precedences.push_back(
        PrecedenceRelation{from, ids_[to], merge, loopback, {}});
  }

  void build_event(RequirementsModel& m, int i) {
    CommunicativeEvent ev;
    ev.id = ids_[i];
    ev.name = "Event " + std::to_string(i) + " happens";
    ev.primary_actor = "Actor " + std::to_string(pick(1, 3));
    ev.interface_actor = coin(0.8) ? "Clerk " + std::to_string(pick(1, 3)) : "";
    if (coin(0.3)) ev.goals = "Record the event";
    if (coin(0.2)) ev.channel = "In person";

    // Precedents among earlier events.
    std::set<int> precedents;
    if (i > 0) {
      const int k = pick(0, std::min(2, i));
      for (int j = 0; j < k; ++j) precedents.insert(pick(0, i - 1));
    }
    std::vector<int> creators_in_reach;
    for (int j : precedents) {
      if (created_.count(j)) creators_in_reach.push_back(j);
    }

    const bool extension = !creators_in_reach.empty() && coin(0.4);
    ev.message.kind = Substructure::Kind::aggregation;
    std::vector<std::string> data_names;
    if (extension) {
      const int creator = creators_in_reach[pick(0, creators_in_reach.size() - 1)];
      ev.message.name = "EXT " + std::to_string(i);
      ev.message.members.push_back(reference(created_[creator], true));
      const int nd = pick(0, 2);
      for (int d = 0; d < nd; ++d) {
        ev.message.members.push_back(data_field());
        data_names.push_back(ev.message.members.back().name());
      }
      const bool want_ref = nd == 0 || coin(0.4);
      if (want_ref) {
        const int target = creators_in_reach[pick(0, creators_in_reach.size() - 1)];
        ev.message.members.push_back(reference(created_[target], false));
        if (coin(0.5)) {
          ev.restrictions.push_back(CardinalityRestriction{
              ev.message.members.back().name(),
              coin(0.5) ? Cardinality::zero_one() : Cardinality::one_one(),
              coin(0.5) ? std::optional(Cardinality::zero_many()) : std::nullopt,
              {}});
        }
      }
    } else {
      const std::string object = "Object " + std::to_string(i);
      objects_.insert(object);
      created_[i] = object;
      ev.message.name = "OBJECT " + std::to_string(i);
      const int nd = pick(1, 3);
      for (int d = 0; d < nd; ++d) {
        ev.message.members.push_back(data_field());
        data_names.push_back(ev.message.members.back().name());
      }
      if (coin(0.4)) {
        ev.identifier = std::vector<std::string>{data_names.front()};
      }
      for (int j : creators_in_reach) {
        if (!coin(0.6)) continue;
        ev.message.members.push_back(reference(created_[j], false));
        if (coin(0.5)) {
          ev.restrictions.push_back(CardinalityRestriction{
              ev.message.members.back().name(),
              coin(0.5) ? Cardinality::one_one() : Cardinality::zero_one(),
              Cardinality::zero_many(),
              {}});
        }
      }
      if (coin(0.35)) {
        Substructure part;
        part.kind = Substructure::Kind::aggregation;
        part.name = "PART " + std::to_string(i);
        const int np = pick(1, 2);
        for (int d = 0; d < np; ++d) part.members.push_back(data_field());
        const bool iterate = coin(0.5);
        if (iterate) {
          Substructure it;
          it.kind = Substructure::Kind::iteration;
          it.name = "PARTS " + std::to_string(i);
          it.members.push_back(Member{std::move(part)});
          ev.message.members.push_back(Member{std::move(it)});
          if (coin(0.5)) {
            ev.restrictions.push_back(CardinalityRestriction{
                "PARTS " + std::to_string(i),
                coin(0.5) ? Cardinality::one_many() : Cardinality::zero_many(),
                Cardinality::one_one(),
                {}});
          }
        } else {
          ev.message.members.push_back(Member{std::move(part)});
          if (coin(0.5)) {
            ev.restrictions.push_back(CardinalityRestriction{
                "PART " + std::to_string(i), Cardinality::one_one(), Cardinality::one_one(), {}});
          }
        }
      }
    }

    if (!data_names.empty() && coin(0.25)) {
      const int nv = pick(1, 2);
      for (int v = 0; v < nv; ++v) {
        const std::string& f = data_names[pick(0, data_names.size() - 1)];
        ev.variants.push_back(EventVariant{
            "V" + std::to_string(i) + std::string(1, static_cast<char>('a' + v)),
            v == 0 ? f + " > 3" : "not (" + f + " > 3)", {}});
      }
    }

    const bool creating = !extension;
    if (precedents.empty()) {
      if (coin(0.6)) add_edge(m, std::string(kStartNode), i, MergeKind::plain);
    } else {
      MergeKind merge = MergeKind::plain;
      if (precedents.size() > 1) {
        merge = creating && coin(0.5) ? MergeKind::and_join : MergeKind::or_merge;
      }
      for (int j : precedents) add_edge(m, ids_[j], i, merge);
    }
    if (i > 0 && coin(0.15)) {
      add_edge(m, ids_[i], pick(0, i - 1), MergeKind::plain, true);
    }
    if (coin(0.15)) {
      m.processes[owner_[i]].precedences.push_back(
          PrecedenceRelation{ids_[i], std::string(kEndNode), MergeKind::plain, false, {}});
    }
    m.processes[owner_[i]].events.push_back(std::move(ev));
  }

  void maybe_annotate(RequirementsModel& m) {
    for (const auto* ev : m.all_events()) {
      for (const auto& v : walk_message(*ev)) {
        const DataField* df = v.member ? v.member->data_field() : nullptr;
        if (!df || df->domain != BasicDomain::text || !coin(0.3)) continue;
        AnnotationSet::Entry& e = m.annotations.entries[v.path];
        e.values["size"] = AnnotationValue{std::to_string(pick(10, 300)), {}};
      }
    }
  }

  std::mt19937 rng_;
  GeneratorLimits limits_;
  std::vector<std::string> ids_;
  std::vector<int> owner_;
  std::map<int, std::string> created_;
  std::set<std::string> objects_;
  int field_counter_ = 0;
};

}  // namespace

RequirementsModel random_model(std::uint32_t seed, const GeneratorLimits& limits) {
  return Generator(seed, limits).run();
}

}  // namespace carmc::testing
