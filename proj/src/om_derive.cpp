#include "carmc/om_derive.hpp"

#include <algorithm>

#include "carmc/annotations.hpp"
#include "carmc/names.hpp"

namespace carmc {

// -- Data types -------------------------------------------------------------

std::vector<DataType> allowed_data_types(BasicDomain domain) {
  std::vector<DataType> row;
  switch (domain) {
    case BasicDomain::number:
      row = {DataType::Nat, DataType::Int, DataType::Real, DataType::Autonumeric};
      break;
    case BasicDomain::text:
      row = {DataType::String, DataType::Text};
      break;
    case BasicDomain::date:
    case BasicDomain::time:
      row = {DataType::Time, DataType::Date, DataType::DateTime};
      break;
    case BasicDomain::money:
      row = {DataType::Real};
      break;
  }
  row.insert(row.end(), {DataType::Bool, DataType::Image, DataType::Blob});
  return row;
}

MappedType map_data_type(BasicDomain domain, std::string_view op,
                         const DataTypeChoice& choice, const SourceLoc& where) {
  MappedType out;
  if (choice.data_type) {
    const auto row = allowed_data_types(domain);
    if (std::find(row.begin(), row.end(), *choice.data_type) == row.end()) {
      throw CompileError(where, "OM10",
                         std::string("data type ") + to_string(*choice.data_type) +
                             " is not a conversion of the '" + to_string(domain) +
                             "' domain");
    }
    out.data_type = *choice.data_type;
  } else {
    switch (domain) {
      case BasicDomain::number:
        out.data_type = op == "g" ? DataType::Autonumeric : DataType::Real;
        break;
      case BasicDomain::text:
        out.data_type = DataType::String;
        break;
      case BasicDomain::date:
      case BasicDomain::time:
        out.data_type = DataType::DateTime;
        break;
      case BasicDomain::money:
        out.data_type = DataType::Real;
        break;
    }
  }
  if (out.data_type == DataType::String) {
    if (choice.size) {
      out.size = choice.size;
    } else {
      out.size = kDefaultStringSize;
      out.size_defaulted = true;
    }
  } else if (choice.size) {
    throw CompileError(where, "OM10",
                       std::string("a size only applies to String, not ") +
                           to_string(out.data_type));
  }
  return out;
}

// -- Builder ----------------------------------------------------------------

struct ObjectModelBuilder::EventContext {
  const CommunicativeEvent& event;
  std::string agent;
  std::string root_class;
  std::vector<std::string> classes;  // touched, first-touch order
  std::map<std::string, std::vector<std::string>> edit_services;
  std::map<std::string, std::vector<std::string>> insert_services;
  std::map<std::string, std::string> extension_path;  // class -> agg path

  void touch(const std::string& cls) {
    if (std::find(classes.begin(), classes.end(), cls) == classes.end()) {
      classes.push_back(cls);
    }
  }
};

namespace {

const CardinalityRestriction* find_restriction(const CommunicativeEvent& ev,
                                               const std::string& path) {
  for (const auto& r : ev.restrictions) {
    const auto resolved = resolve_subject(ev, r.subject);
    if (resolved.size() == 1 && resolved.front() == path) return &r;
  }
  return nullptr;
}

}  // namespace

ObjectModelBuilder::ObjectModelBuilder(const RequirementsModel& model,
                                       DeriveOptions options,
                                       DiagnosticSink& sink)
    : model_(model), options_(options), sink_(sink) {
  // Non-loopback predecessor sets, closed transitively.
  std::map<std::string, std::vector<std::string>> preds;
  for (const auto* p : model.all_precedences()) {
    if (p->loopback || p->from_start() || p->to_end()) continue;
    preds[p->to].push_back(p->from);
  }
  for (const auto* ev : model.all_events()) {
    std::set<std::string>& seen = ancestors_[ev->id];
    std::vector<std::string> stack = preds[ev->id];
    while (!stack.empty()) {
      std::string cur = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      for (const auto& p : preds[cur]) stack.push_back(p);
    }
  }
}

ObjectModelBuilder::~ObjectModelBuilder() = default;

bool ObjectModelBuilder::precedes(const std::string& earlier,
                                  const std::string& later) const {
  auto it = ancestors_.find(later);
  return it != ancestors_.end() && it->second.count(earlier) > 0;
}

ObjectModelResult ObjectModelBuilder::finish() && {
  return ObjectModelResult{std::move(om_), std::move(trace_)};
}

Class& ObjectModelBuilder::class_ref(const std::string& name) {
  return *om_.find_class(name);
}

void ObjectModelBuilder::fallback(const SourceLoc& loc, const std::string& code,
                                  const std::string& message) {
  if (options_.strict) {
    throw CompileError(loc, code, message + " (strict mode)");
  }
  sink_.warning(loc, code, message);
}

std::string ObjectModelBuilder::unique_class_name(std::string base,
                                                  const SourceLoc& loc) {
  if (!om_.find_class(base)) return base;
  for (int n = 2;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!om_.find_class(candidate)) {
      sink_.warning(loc, "OM5",
                    "class name " + base + " is taken; using " + candidate);
      return candidate;
    }
  }
}

std::string ObjectModelBuilder::unique_attribute_name(const Class& cls,
                                                      std::string base,
                                                      const SourceLoc& loc) {
  if (!cls.find_attribute(base)) return base;
  for (int n = 2;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (!cls.find_attribute(candidate)) {
      sink_.warning(loc, "OM7",
                    "attribute " + cls.name + "." + base + " exists; using " +
                        candidate);
      return candidate;
    }
  }
}

std::string ObjectModelBuilder::unique_service_name(
    const std::vector<const Class*>& owners, std::string base,
    const SourceLoc& loc) {
  auto free = [&](const std::string& n) {
    return std::none_of(owners.begin(), owners.end(),
                        [&](const Class* c) { return c->find_service(n) != nullptr; });
  };
  if (free(base)) return base;
  for (int n = 2;; ++n) {
    std::string candidate = base + "_" + std::to_string(n);
    if (free(candidate)) {
      sink_.warning(loc, "OM18",
                    "service " + base + " exists; using " + candidate);
      return candidate;
    }
  }
}

Argument ObjectModelBuilder::self_argument(const std::string& cls) const {
  Argument a;
  a.name = "p_this" + names::camel(cls);
  a.kind = ArgKind::object_valued;
  a.class_ref = cls;
  a.null_allowed = false;
  return a;
}

void ObjectModelBuilder::add_service(const std::string& cls, Service svc,
                                     const std::string& rule,
                                     const std::string& source,
                                     const EventContext& ctx) {
  const std::string svc_path = paths::service(cls, svc.name);
  trace_.add(TraceLink{rule, source, svc_path, TraceKind::service, ctx.event.id,
                       cls, svc.name});
  for (std::size_t i = 0; i < svc.arguments.size(); ++i) {
    const Argument& a = svc.arguments[i];
    if (i == 0 && svc.kind != ServiceKind::creation) {
      trace_.add(TraceLink{"OM22", ctx.event.id,
                           paths::argument(cls, svc.name, a.name),
                           TraceKind::argument, ctx.event.id, cls, a.name});
    }
  }
  class_ref(cls).services.push_back(std::move(svc));
}

const ObjectModelBuilder::Registration& ObjectModelBuilder::referenced_class(
    const ReferenceField& field, const char* rule) const {
  auto it = registry_.find(names::business_object_key(field.domain));
  if (it == registry_.end()) {
    throw CompileError(
        field.loc, rule,
        "no class has been derived for business object '" + field.domain +
            "' referenced by field '" + field.name +
            "'; the requirements model suffers from incompleteness (is an "
            "event missing or misordered?)");
  }
  return it->second;
}

void ObjectModelBuilder::derive_event_view(const CommunicativeEvent& event) {
  EventContext ctx{event, names::to_upper(names::squeeze(event.interface_actor)),
                   {}, {}, {}, {}, {}};
  const std::string root_path = event.id + "/" + event.message.name;
  visit_aggregation(event.message, root_path, std::nullopt, "", false, ctx);
  finish_event(ctx);
}

void ObjectModelBuilder::visit_aggregation(
    const Substructure& agg, const std::string& path,
    const std::optional<std::string>& parent_class,
    const std::string& nesting_path, bool via_iteration, EventContext& ctx) {
  const ReferenceField* marked = nullptr;
  for (const auto& m : agg.members) {
    const auto* rf = m.reference_field();
    if (!rf || !rf->extends_business_object) continue;
    if (marked) {
      throw CompileError(rf->loc, "OM2",
                         "aggregation '" + agg.name +
                             "' has more than one reference field marked as "
                             "extending a business object");
    }
    marked = rf;
  }
  const std::string cls =
      marked ? extend_class_view(agg, path, *marked, parent_class, nesting_path,
                                 via_iteration, ctx)
             : create_class_view(agg, path, parent_class, nesting_path,
                                 via_iteration, ctx);
  if (!parent_class) ctx.root_class = cls;

  for (const auto& m : agg.members) {
    const Substructure* sub = m.substructure();
    if (!sub) continue;
    const std::string member_path = path + "/" + sub->name;
    std::string inner_path = member_path;
    bool iteration = false;
    while (!sub->is_aggregation()) {
      iteration = true;
      sub = sub->members.front().substructure();
      inner_path += "/" + sub->name;
    }
    visit_aggregation(*sub, inner_path, cls, member_path, iteration, ctx);
  }
}

void ObjectModelBuilder::add_nesting_relationship(
    const std::string& parent_class, const std::string& nested_class,
    const Substructure& agg, const std::string& path,
    const std::string& nesting_path, bool via_iteration, EventContext& ctx) {
  const Annotations ann(model_.annotations);
  const CardinalityRestriction* r = find_restriction(ctx.event, path);
  if (!r && nesting_path != path) r = find_restriction(ctx.event, nesting_path);
  auto annotated = [&](const std::string& key) {
    auto c = ann.cardinality(path, key);
    if (!c && nesting_path != path) c = ann.cardinality(nesting_path, key);
    return c;
  };

  StructuralRelationship rel;
  rel.class_a = parent_class;
  rel.class_b = nested_class;
  rel.origin = RelOrigin::nesting;
  rel.role = agg.name;

  std::optional<Cardinality> nested_side =
      r ? std::optional(r->referenced_side) : annotated("cardinality");
  std::optional<Cardinality> parent_side =
      r ? r->referrer_side : annotated("opposite_cardinality");

  if (nested_side && nested_side->many != via_iteration) {
    throw CompileError(r ? r->loc : agg.loc, "OM14",
                       "maximum cardinality on the side of " + nested_class +
                           " must be " + (via_iteration ? "M" : "1") +
                           " because " +
                           (via_iteration ? "an iteration" : "no iteration") +
                           " lies between the substructures");
  }
  if (!nested_side || !parent_side) {
    fallback(agg.loc, "OM15",
             "no structural restriction for the nesting " + parent_class + " / " +
                 nested_class + "; assuming the default cardinalities");
  }
  rel.card_b = nested_side.value_or(via_iteration ? Cardinality::zero_many()
                                                  : Cardinality::one_one());
  rel.card_a = parent_side.value_or(Cardinality::one_one());
  trace_.add(TraceLink{"OM13", path, paths::relationship(rel),
                       TraceKind::relationship, ctx.event.id, parent_class, ""});
  om_.relationships.push_back(std::move(rel));
}

std::string ObjectModelBuilder::create_class_view(
    const Substructure& agg, const std::string& path,
    const std::optional<std::string>& parent_class,
    const std::string& nesting_path, bool via_iteration, EventContext& ctx) {
  const Annotations ann(model_.annotations);
  const CommunicativeEvent& ev = ctx.event;

  // OM4/OM5
  std::string name = ann.text(path, "class_name").value_or(names::class_name(agg.name));
  name = unique_class_name(std::move(name), agg.loc);
  om_.classes.push_back(Class{name, {}, {}});
  ctx.touch(name);
  trace_.add(TraceLink{"OM4", path, name, TraceKind::class_created, ev.id, name, name});
  registry_.try_emplace(names::business_object_key(agg.name),
                        Registration{name, ev.id, path});

  std::vector<std::pair<const DataField*, std::string>> data_fields;
  std::vector<std::pair<const ReferenceField*, std::string>> ref_fields;
  for (const auto& m : agg.members) {
    if (const auto* df = m.data_field()) data_fields.emplace_back(df, path + "/" + df->name);
    if (const auto* rf = m.reference_field()) ref_fields.emplace_back(rf, path + "/" + rf->name);
  }

  // OM8: identification function.
  std::vector<std::string> id_fields;
  SourceLoc id_loc = agg.loc;
  if (!parent_class && ev.identifier) {
    id_fields = *ev.identifier;
    id_loc = ev.loc;
  } else if (auto listed = ann.text(path, "identifier")) {
    std::string rest = *listed;
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t comma = rest.find(',', start);
      std::string item = names::squeeze(
          rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (!item.empty()) id_fields.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    id_loc = ann.loc(path, "identifier");
  }
  std::set<const DataField*> id_set;
  for (const auto& wanted : id_fields) {
    auto it = std::find_if(data_fields.begin(), data_fields.end(), [&](const auto& p) {
      return names::iequals(names::squeeze(p.first->name), names::squeeze(wanted));
    });
    if (it == data_fields.end()) {
      throw CompileError(id_loc, "OM8",
                         "identifier field '" + wanted + "' is not a data field of '" +
                             agg.name + "'");
    }
    id_set.insert(it->first);
  }

  Class* cls = &class_ref(name);
  if (id_set.empty()) {
    Attribute synthetic;
    synthetic.name = unique_attribute_name(*cls, names::to_lower(name) + "_id", agg.loc);
    synthetic.id = true;
    synthetic.attr_type = AttrType::constant;
    synthetic.data_type = DataType::Autonumeric;
    synthetic.requested = true;
    synthetic.null_allowed = false;
    trace_.add(TraceLink{"OM8", path, paths::attribute(name, synthetic.name),
                         TraceKind::attribute, ev.id, name, synthetic.name});
    cls->attributes.push_back(std::move(synthetic));
  }

  // OM6-OM12
  std::vector<std::pair<std::string, std::string>> attr_of_field;  // (field path, attr)
  for (const auto& [df, fpath] : data_fields) {
    Attribute a;
    a.name = unique_attribute_name(
        *cls, ann.text(fpath, "attribute_name").value_or(names::attribute_name(df->name)),
        df->loc);
    a.id = id_set.count(df) > 0;
    const auto annotated_type = ann.text(fpath, "attr_type");
    if (annotated_type) {
      auto t = parse_attr_type(*annotated_type);
      if (!t) {
        throw CompileError(ann.loc(fpath, "attr_type"), codes::kAnnotation,
                           "attr_type must be constant or variable");
      }
      a.attr_type = *t;
    } else {
      a.attr_type = a.id ? AttrType::constant : AttrType::variable;
    }
    if (a.id && a.attr_type != AttrType::constant) {
      throw CompileError(ann.loc(fpath, "attr_type"), "OM9",
                         "identifier attribute " + a.name + " must be constant");
    }
    DataTypeChoice choice;
    if (auto dt = ann.text(fpath, "data_type")) {
      choice.data_type = parse_data_type(*dt);
      if (!choice.data_type) {
        throw CompileError(ann.loc(fpath, "data_type"), codes::kAnnotation,
                           "unknown data type '" + *dt + "'");
      }
    }
    choice.size = ann.positive_int(fpath, "size");
    const MappedType mapped = map_data_type(
        df->domain, df->op, choice,
        choice.data_type ? ann.loc(fpath, "data_type") : df->loc);
    if (mapped.size_defaulted) {
      fallback(df->loc, "OM10",
               "no size chosen for String attribute " + name + "." + a.name +
                   "; using " + std::to_string(kDefaultStringSize));
    }
    a.data_type = mapped.data_type;
    a.size = mapped.size;
    if (a.data_type == DataType::Autonumeric && a.attr_type != AttrType::constant) {
      if (annotated_type) {
        throw CompileError(ann.loc(fpath, "attr_type"), "OM10",
                           "Autonumeric attribute " + a.name + " must be constant");
      }
      a.attr_type = AttrType::constant;
    }
    a.requested = ann.boolean(fpath, "requested").value_or(true);
    a.null_allowed = ann.boolean(fpath, "null_allowed").value_or(!a.id);
    if (a.id && a.null_allowed) {
      throw CompileError(ann.loc(fpath, "null_allowed"), "OM12",
                         "identifier attribute " + a.name + " cannot allow nulls");
    }
    trace_.add(TraceLink{"OM6", fpath, paths::attribute(name, a.name),
                         TraceKind::attribute, ev.id, name, a.name});
    attr_of_field.emplace_back(fpath, a.name);
    cls->attributes.push_back(std::move(a));
  }

  // OM13-OM15
  if (parent_class) {
    add_nesting_relationship(*parent_class, name, agg, path, nesting_path,
                             via_iteration, ctx);
  }

  // OM16/OM17
  struct RefInfo {
    const ReferenceField* field;
    std::string path;
    std::string target;
    Cardinality referenced;
  };
  std::vector<RefInfo> refs;
  for (const auto& [rf, fpath] : ref_fields) {
    const Registration& target = referenced_class(*rf, "OM16");
    const CardinalityRestriction* r = find_restriction(ev, fpath);
    std::optional<Cardinality> referenced =
        r ? std::optional(r->referenced_side) : ann.cardinality(fpath, "cardinality");
    std::optional<Cardinality> referrer =
        r ? r->referrer_side : ann.cardinality(fpath, "opposite_cardinality");
    if (r && !referrer) referrer = ann.cardinality(fpath, "opposite_cardinality");
    if (referenced && referenced->many) {
      throw CompileError(r ? r->loc : ann.loc(fpath, "cardinality"), "OM17",
                         "maximum cardinality on the side of " + target.class_name +
                             " must be 1 (use an iteration for many)");
    }
    if (!referenced || !referrer) {
      fallback(rf->loc, "OM15",
               "no structural restriction for reference field '" + rf->name +
                   "'; assuming the default cardinalities");
    }
    StructuralRelationship rel;
    rel.class_a = name;
    rel.class_b = target.class_name;
    rel.card_b = referenced.value_or(Cardinality::one_one());
    rel.card_a = referrer.value_or(Cardinality::zero_many());
    rel.origin = RelOrigin::reference;
    rel.role = rf->name;
    trace_.add(TraceLink{"OM16", fpath, paths::relationship(rel),
                         TraceKind::relationship, ev.id, name, ""});
    refs.push_back(RefInfo{rf, fpath, target.class_name, rel.card_b});
    om_.relationships.push_back(std::move(rel));
  }

  // OM18-OM20
  cls = &class_ref(name);
  Service creation;
  creation.kind = ServiceKind::creation;
  creation.name = unique_service_name(
      {cls}, ann.text(path, "creation_service").value_or("new_" + names::to_lower(name)),
      agg.loc);
  if (!ctx.agent.empty()) creation.agents.push_back(ctx.agent);
  for (const auto& [fpath, attr_name] : attr_of_field) {
    const Attribute* a = cls->find_attribute(attr_name);
    Argument arg;
    arg.name = ann.text(fpath, "argument_name").value_or("p_atr" + a->name);
    arg.kind = ArgKind::data_valued;
    arg.data_type = a->data_type;
    arg.size = a->size;
    arg.null_allowed = a->null_allowed;
    trace_.add(TraceLink{"OM19", fpath, paths::argument(name, creation.name, arg.name),
                         TraceKind::argument, ev.id, name, arg.name});
    creation.arguments.push_back(std::move(arg));
  }
  for (const auto& ref : refs) {
    if (!ann.boolean(ref.path, "argument").value_or(true)) continue;
    Argument arg;
    arg.name = ann.text(ref.path, "argument_name")
                   .value_or("p_agr" + names::camel(ref.field->name));
    arg.kind = ArgKind::object_valued;
    arg.class_ref = ref.target;
    arg.null_allowed = ref.referenced.min == 0;
    trace_.add(TraceLink{"OM20", ref.path, paths::argument(name, creation.name, arg.name),
                         TraceKind::argument, ev.id, name, arg.name});
    creation.arguments.push_back(std::move(arg));
  }
  add_service(name, std::move(creation), "OM18", path, ctx);
  return name;
}

std::string ObjectModelBuilder::extend_class_view(
    const Substructure& agg, const std::string& path, const ReferenceField& marked,
    const std::optional<std::string>& parent_class, const std::string& nesting_path,
    bool via_iteration, EventContext& ctx) {
  const Annotations ann(model_.annotations);
  const CommunicativeEvent& ev = ctx.event;

  // OM23 step 2: follow the trace of the precedent event's aggregation.
  const Registration& reg = referenced_class(marked, "OM23");
  if (reg.event != ev.id && !precedes(reg.event, ev.id)) {
    throw CompileError(marked.loc, "OM23",
                       "business object '" + marked.domain + "' was derived by " +
                           reg.event + ", which does not precede " + ev.id +
                           "; the precedence relationships are invalid");
  }
  const std::string name = reg.class_name;
  ctx.touch(name);
  ctx.extension_path.try_emplace(name, path);
  trace_.add(TraceLink{"OM23", path, name, TraceKind::class_extended, ev.id, name, name});

  // OM24
  std::vector<std::pair<std::string, std::string>> added;  // (field path, attr)
  for (const auto& m : agg.members) {
    const DataField* df = m.data_field();
    if (!df) continue;
    const std::string fpath = path + "/" + df->name;
    for (const char* key : {"attr_type", "null_allowed", "requested"}) {
      if (ann.text(fpath, key)) {
        sink_.warning(ann.loc(fpath, key), "OM24",
                      std::string("'") + key +
                          "' is fixed for attributes added by extension; "
                          "annotation ignored");
      }
    }
    Class& cls = class_ref(name);
    Attribute a;
    a.name = unique_attribute_name(
        cls, ann.text(fpath, "attribute_name").value_or(names::attribute_name(df->name)),
        df->loc);
    a.id = false;
    a.attr_type = AttrType::variable;
    a.requested = false;
    a.null_allowed = true;
    DataTypeChoice choice;
    if (auto dt = ann.text(fpath, "data_type")) {
      choice.data_type = parse_data_type(*dt);
      if (!choice.data_type) {
        throw CompileError(ann.loc(fpath, "data_type"), codes::kAnnotation,
                           "unknown data type '" + *dt + "'");
      }
      if (*choice.data_type == DataType::Autonumeric) {
        throw CompileError(ann.loc(fpath, "data_type"), "OM24",
                           "Autonumeric is only for constant attributes; " + a.name +
                               " is variable");
      }
    }
    choice.size = ann.positive_int(fpath, "size");
    // Autonumeric is reserved for constant attributes, so a `g` number
    // field gets the plain default here.
    const MappedType mapped = map_data_type(
        df->domain, df->domain == BasicDomain::number ? "" : df->op, choice,
        choice.data_type ? ann.loc(fpath, "data_type") : df->loc);
    if (mapped.size_defaulted) {
      fallback(df->loc, "OM10",
               "no size chosen for String attribute " + name + "." + a.name +
                   "; using " + std::to_string(kDefaultStringSize));
    }
    a.data_type = mapped.data_type;
    a.size = mapped.size;
    trace_.add(TraceLink{"OM24", fpath, paths::attribute(name, a.name),
                         TraceKind::attribute, ev.id, name, a.name});
    added.emplace_back(fpath, a.name);
    cls.attributes.push_back(std::move(a));
  }

  if (parent_class) {
    add_nesting_relationship(*parent_class, name, agg, path, nesting_path,
                             via_iteration, ctx);
  }

  // OM23 steps 4-5
  struct NewLink {
    std::string path;
    std::string target;
    const ReferenceField* field;
  };
  std::vector<NewLink> links;
  for (const auto& m : agg.members) {
    const ReferenceField* rf = m.reference_field();
    if (!rf || rf == &marked) continue;
    const std::string fpath = path + "/" + rf->name;
    const Registration& target = referenced_class(*rf, "OM16");
    const CardinalityRestriction* r = find_restriction(ev, fpath);
    std::optional<Cardinality> referenced =
        r ? std::optional(r->referenced_side) : ann.cardinality(fpath, "cardinality");
    std::optional<Cardinality> referrer =
        r ? r->referrer_side : ann.cardinality(fpath, "opposite_cardinality");
    if (r && !referrer) referrer = ann.cardinality(fpath, "opposite_cardinality");
    if (referenced && referenced->many) {
      throw CompileError(r ? r->loc : ann.loc(fpath, "cardinality"), "OM17",
                         "maximum cardinality on the side of " + target.class_name +
                             " must be 1 (use an iteration for many)");
    }
    if (referenced && referenced->min != 0) {
      sink_.warning(r ? r->loc : ann.loc(fpath, "cardinality"), "OM23",
                    "minimum cardinality on the side of " + target.class_name +
                        " is 0 for links added after creation; " +
                        referenced->str() + " becomes 0:1");
    }
    if (!referrer) {
      fallback(rf->loc, "OM15",
               "no structural restriction for reference field '" + rf->name +
                   "'; assuming the default cardinalities");
    }
    StructuralRelationship rel;
    rel.class_a = name;
    rel.class_b = target.class_name;
    rel.card_b = Cardinality::zero_one();
    rel.card_a = referrer.value_or(Cardinality::zero_many());
    rel.origin = RelOrigin::extension;
    rel.role = rf->name;
    trace_.add(TraceLink{"OM23", fpath, paths::relationship(rel),
                         TraceKind::relationship, ev.id, name, ""});
    links.push_back(NewLink{fpath, target.class_name, rf});
    om_.relationships.push_back(std::move(rel));
  }

  // OM25 steps 1-2
  if (!added.empty()) {
    std::string svc_name;
    if (auto named = ann.text(path, "edit_service")) {
      svc_name = *named;
    } else if (added.size() == 1) {
      svc_name = "set_" + added.front().second;
    } else {
      svc_name = "edit_" + names::snake(names::event_token(ev.id));
      fallback(agg.loc, "OM25",
               "no name chosen for the service setting " +
                   std::to_string(added.size()) + " attributes of " + name +
                   "; using " + svc_name);
    }
    Class& cls = class_ref(name);
    Service edit;
    edit.kind = ServiceKind::edit;
    edit.name = unique_service_name({&cls}, svc_name, agg.loc);
    if (!ctx.agent.empty()) edit.agents.push_back(ctx.agent);
    edit.arguments.push_back(self_argument(name));
    for (const auto& [fpath, attr_name] : added) {
      const Attribute* a = cls.find_attribute(attr_name);
      Argument arg;
      arg.name = ann.text(fpath, "argument_name").value_or("p_atr" + a->name);
      arg.kind = ArgKind::data_valued;
      arg.data_type = a->data_type;
      arg.size = a->size;
      arg.null_allowed = a->null_allowed;
      trace_.add(TraceLink{"OM25", fpath, paths::argument(name, edit.name, arg.name),
                           TraceKind::argument, ev.id, name, arg.name});
      edit.arguments.push_back(std::move(arg));
    }
    ctx.edit_services[name].push_back(edit.name);
    add_service(name, std::move(edit), "OM25", path, ctx);
  }

  // OM25 step 4: shared insertion/deletion services on both ends.
  for (const auto& link : links) {
    Class& owner = class_ref(name);
    Class& other = class_ref(link.target);
    const std::string suffix = names::to_lower(link.target);
    const std::string ins = unique_service_name({&owner, &other}, "ins_" + suffix,
                                                link.field->loc);
    const std::string del = unique_service_name({&owner, &other}, "del_" + suffix,
                                                link.field->loc);
    std::vector<std::pair<std::string, std::string>> ends = {{name, link.target}};
    if (link.target != name) ends.emplace_back(link.target, name);
    for (const auto& [self, peer] : ends) {
      for (const auto& [svc_name, kind] :
           {std::pair{ins, ServiceKind::shared_insert},
            std::pair{del, ServiceKind::shared_delete}}) {
        Service s;
        s.name = svc_name;
        s.kind = kind;
        s.shared_with = peer;
        if (!ctx.agent.empty()) s.agents.push_back(ctx.agent);
        s.arguments.push_back(self_argument(self));
        Argument other_arg;
        other_arg.name = "p_agr" + names::camel(peer);
        other_arg.kind = ArgKind::object_valued;
        other_arg.class_ref = peer;
        other_arg.null_allowed = false;
        trace_.add(TraceLink{"OM25", link.path,
                             paths::argument(self, svc_name, other_arg.name),
                             TraceKind::argument, ev.id, self, other_arg.name});
        s.arguments.push_back(std::move(other_arg));
        add_service(self, std::move(s), "OM25", link.path, ctx);
      }
    }
    ctx.insert_services[name].push_back(ins);
    if (link.target != name) ctx.touch(link.target);
  }
  return name;
}

void ObjectModelBuilder::finish_event(EventContext& ctx) {
  const Annotations ann(model_.annotations);
  const CommunicativeEvent& ev = ctx.event;
  const std::string root_path = ev.id + "/" + ev.message.name;
  const std::string default_name =
      ev.name.empty() ? names::event_token(ev.id)
                      : names::event_token(ev.id) + "_" + names::snake(ev.name);

  // OM21: complex business objects get an end-of-editing service on the
  // class of the root aggregation. Classes only touched through shared
  // services do not count.
  std::size_t derived_classes = 0;
  for (const auto& l : trace_.links()) {
    if (l.event == ev.id && (l.kind == TraceKind::class_created ||
                             l.kind == TraceKind::class_extended)) {
      ++derived_classes;
    }
  }
  if (derived_classes > 1) {
    Class& root = class_ref(ctx.root_class);
    Service eoe;
    eoe.kind = ServiceKind::end_of_editing;
    eoe.name = unique_service_name(
        {&root}, ann.text(root_path, "end_of_editing_service").value_or(default_name),
        ev.loc);
    if (!ctx.agent.empty()) eoe.agents.push_back(ctx.agent);
    eoe.arguments.push_back(self_argument(ctx.root_class));
    add_service(ctx.root_class, std::move(eoe), "OM21", ev.id, ctx);
  }

  // OM26: one transaction per extended class that received two or more
  // services to run together: edit services, then shared insertions.
  for (const auto& cls : ctx.classes) {
    std::vector<std::string> components = ctx.edit_services[cls];
    const auto& inserts = ctx.insert_services[cls];
    components.insert(components.end(), inserts.begin(), inserts.end());
    if (components.size() < 2) continue;
    const std::string& agg_path = ctx.extension_path[cls];
    std::string base = ann.text(agg_path, "transaction").value_or(default_name);
    std::string txn_name = base;
    for (int n = 2; om_.find_transaction(cls, txn_name) ||
                    class_ref(cls).find_service(txn_name);
         ++n) {
      txn_name = base + "_" + std::to_string(n);
    }
    trace_.add(TraceLink{"OM26", ev.id, paths::transaction(cls, txn_name),
                         TraceKind::transaction, ev.id, cls, txn_name});
    om_.transactions.push_back(Transaction{txn_name, cls, std::move(components)});
  }
}

ObjectModelResult derive_object_model(const RequirementsModel& model,
                                      const std::vector<std::string>& order,
                                      const DeriveOptions& options,
                                      DiagnosticSink& sink) {
  ObjectModelBuilder builder(model, options, sink);
  for (const auto& id : order) {
    const CommunicativeEvent* ev = model.find_event(id);
    if (!ev) {
      throw CompileError(SourceLoc{}, "OM3", "ordered event " + id + " is not in the model");
    }
    try {
      builder.derive_event_view(*ev);
    } catch (const CompileError& err) {
      std::vector<Diagnostic> diags = err.diagnostics();
      for (auto& d : diags) d.message = "while processing " + ev->id + ": " + d.message;
      throw CompileError(std::move(diags));
    }
  }
  return std::move(builder).finish();
}

ObjectModelResult derive_object_model(const RequirementsModel& model,
                                      const std::vector<std::string>& order) {
  DiagnosticSink sink;
  return derive_object_model(model, order, DeriveOptions{}, sink);
}

}  // namespace carmc
