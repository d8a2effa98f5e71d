#include "huuzlee/ontology.hpp"

#include <cctype>
#include <set>

#include "huuzlee/machine.hpp"

namespace huuzlee::ontology {

std::string_view to_string(TermKind k) {
    switch (k) {
    case TermKind::Concept: return "Concept";
    case TermKind::Property: return "Property";
    case TermKind::MessageKind: return "MessageKind";
    case TermKind::StateKind: return "StateKind";
    }
    return "?";
}

std::optional<TermKind> parse_kind(std::string_view s) {
    for (auto k : {TermKind::Concept, TermKind::Property, TermKind::MessageKind, TermKind::StateKind})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::optional<Iri> Iri::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0) return std::nullopt;
    std::string_view scheme = text.substr(0, colon);
    if (!std::isalpha(static_cast<unsigned char>(scheme[0]))) return std::nullopt;
    for (char c : scheme)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return std::nullopt;
    std::string_view rest = text.substr(colon + 1);
    for (char c : rest)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '|' || c == '<' || c == '>') return std::nullopt;
    auto hash = rest.find('#');
    Iri out{std::string(scheme), std::string(rest.substr(0, hash)), ""};
    if (hash != std::string_view::npos) {
        out.fragment = std::string(rest.substr(hash + 1));
        if (out.fragment.empty() || out.fragment.find('#') != std::string::npos) return std::nullopt;
    }
    if (out.path.empty()) return std::nullopt;
    return out;
}

void Registry::add(Term t, Position pos) {
    if (index_.count(t.id)) throw SyntaxError("DuplicateTermId", pos, "term '" + t.id + "' defined twice");
    index_.emplace(t.id, terms_.size());
    terms_.push_back(std::move(t));
}

const Term* Registry::find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &terms_[it->second];
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Calls fn(line, pos) for each non-blank line not starting with `comment`.
template <typename Fn>
void for_each_line(const SourceUnit& src, std::string_view comment, Fn&& fn) {
    std::uint32_t lineno = 0;
    std::size_t start = 0;
    while (start <= src.text.size()) {
        auto end = src.text.find('\n', start);
        if (end == std::string::npos) end = src.text.size();
        ++lineno;
        std::string line = trim(std::string_view(src.text).substr(start, end - start));
        if (!line.empty() && line.rfind(comment, 0) != 0) fn(line, Position{lineno, 1});
        start = end + 1;
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto p = s.find(sep, start);
        out.push_back(trim(std::string_view(s).substr(start, p == std::string::npos ? std::string::npos : p - start)));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return out;
}

} // namespace

Registry load_registry(const SourceUnit& src) {
    Registry reg;
    for_each_line(src, "#", [&](const std::string& line, Position pos) {
        auto cells = split(line, '|');
        if (cells.size() != 3 || cells[0].empty() || cells[1].empty())
            throw SyntaxError("MalformedLine", pos, "expected 'id | label | kind'");
        if (!Iri::parse(cells[0])) throw SyntaxError("MalformedIri", pos, "'" + cells[0] + "' is not scheme:path[#fragment]");
        auto kind = parse_kind(cells[2]);
        if (!kind) throw SyntaxError("UnknownKind", pos, "unknown term kind '" + cells[2] + "'");
        reg.add({cells[0], cells[1], *kind}, pos);
    });
    return reg;
}

std::vector<Binding> load_annotations(const SourceUnit& src) {
    std::vector<Binding> out;
    std::set<std::string> seen;
    for_each_line(src, "//", [&](const std::string& line, Position pos) {
        auto arrow = line.find("->");
        if (arrow == std::string::npos) throw SyntaxError("MalformedLine", pos, "expected 'name -> termId'");
        Binding b{trim(line.substr(0, arrow)), trim(line.substr(arrow + 2)), pos};
        if (b.name.empty() || b.term.empty()) throw SyntaxError("MalformedLine", pos, "expected 'name -> termId'");
        if (!seen.insert(b.name).second) throw SyntaxError("DuplicateBinding", pos, "'" + b.name + "' bound twice");
        out.push_back(std::move(b));
    });
    return out;
}

namespace {

void collect_emitted(const std::vector<lang::Action>& actions, std::vector<std::pair<std::string, Position>>& out) {
    for (const auto& a : actions) {
        if (const auto* s = std::get_if<lang::Send>(&a.node)) {
            std::string type = s->message_type ? *s->message_type
                                               : machine::derive_message_type(std::get<lang::Template>(s->body));
            out.emplace_back(type, s->pos);
        } else if (const auto* m = std::get_if<lang::Match>(&a.node)) {
            collect_emitted(m->on_success, out);
            collect_emitted(m->on_fail, out);
        }
    }
}

} // namespace

std::vector<NamedItem> bindable_names(const lang::ActorDefinition& def, const std::string& actor) {
    std::vector<NamedItem> out;
    auto add = [&](std::string local, NameKind kind, Position pos) {
        out.push_back({actor + "/" + local, local, kind, pos, std::nullopt});
    };
    for (const auto& r : def.records) {
        add(r.name, NameKind::Record, r.pos);
        for (const auto& f : r.fields) add(r.name + "." + f.name, NameKind::Field, f.pos);
    }
    for (const auto& s : def.states) add("$" + s.name, NameKind::State, s.pos);
    std::set<std::string> messages;
    std::vector<std::pair<std::string, Position>> emitted;
    for (const auto& s : def.states)
        for (const auto& h : s.handlers) {
            if (h.trigger.kind == lang::Trigger::Kind::Message && messages.insert(h.trigger.message).second)
                add("#" + h.trigger.message, NameKind::Message, h.pos);
            collect_emitted(h.actions, emitted);
        }
    for (const auto& [type, pos] : emitted)
        if (messages.insert(type).second) add("#" + type, NameKind::Message, pos);
    return out;
}

std::vector<std::string> AnnotatedDefinition::unbound() const {
    std::vector<std::string> out;
    for (const auto& it : items)
        if (it.kind != NameKind::Record && !it.term) out.push_back(it.local);
    return out;
}

const Term* AnnotatedDefinition::term_of(std::string_view local) const {
    for (const auto& it : items)
        if (it.local == local) return it.term ? &*it.term : nullptr;
    return nullptr;
}

AnnotatedDefinition annotate(const lang::ActorDefinition& def, const std::string& actor,
                             const std::vector<Binding>& bindings, const Registry& registry) {
    AnnotatedDefinition out{actor, bindable_names(def, actor)};
    for (const auto& b : bindings) {
        std::string local = b.name;
        if (auto slash = b.name.find('/'); slash != std::string::npos) {
            if (b.name.substr(0, slash) != actor)
                throw SyntaxError("UnknownQualifiedName", b.pos, "'" + b.name + "' names another actor");
            local = b.name.substr(slash + 1);
        }
        NamedItem* target = nullptr;
        for (auto& it : out.items)
            if (it.local == local) target = &it;
        // states resolve case-insensitively, like `$State` references
        if (!target && !local.empty() && local[0] == '$')
            for (auto& it : out.items)
                if (it.kind == NameKind::State && lang::iequals(it.local, local)) target = &it;
        if (!target) throw SyntaxError("UnknownQualifiedName", b.pos, "'" + b.name + "' is not a name of " + actor);
        const Term* t = registry.find(b.term);
        if (!t) throw SyntaxError("UnknownTerm", b.pos, "no term '" + b.term + "' in the registry");
        if (target->term)
            throw SyntaxError("DuplicateBinding", b.pos, "'" + target->qualified + "' bound twice");
        target->term = *t;
    }
    return out;
}

std::vector<Diagnostic> check_strict(const AnnotatedDefinition& adef, const std::string& file) {
    std::vector<Diagnostic> out;
    for (const auto& it : adef.items) {
        TermKind want = TermKind::Concept;
        switch (it.kind) {
        case NameKind::Record: want = TermKind::Concept; break;
        case NameKind::Field: want = TermKind::Property; break;
        case NameKind::Message: want = TermKind::MessageKind; break;
        case NameKind::State: want = TermKind::StateKind; break;
        }
        if (!it.term) {
            if (it.kind != NameKind::Record)
                out.push_back({file, it.pos.line, it.pos.column, "Unbound", "Unbound(" + it.local + ")"});
            continue;
        }
        if (it.term->kind != want)
            out.push_back({file, it.pos.line, it.pos.column, "KindMismatch",
                           "KindMismatch(" + it.local + "): bound to " + std::string(to_string(it.term->kind)) + " term '" +
                               it.term->id + "', expected " + std::string(to_string(want))});
    }
    return out;
}

} // namespace huuzlee::ontology
