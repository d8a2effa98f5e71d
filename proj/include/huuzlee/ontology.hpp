#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "huuzlee/ast.hpp"
#include "huuzlee/source.hpp"

namespace huuzlee::ontology {

enum class TermKind { Concept, Property, MessageKind, StateKind };

std::string_view to_string(TermKind k);
std::optional<TermKind> parse_kind(std::string_view s);

/// `scheme:path[#fragment]`, e.g. `trade:contract#price`.
struct Iri {
    std::string scheme;
    std::string path;
    std::string fragment; // empty when absent

    static std::optional<Iri> parse(std::string_view text);
};

struct Term {
    std::string id;
    std::string label;
    TermKind kind = TermKind::Concept;
    friend bool operator==(const Term&, const Term&) = default;
};

class Registry {
public:
    /// Throws SyntaxError("DuplicateTermId") on a repeated id.
    void add(Term t, Position pos = {});
    const Term* find(std::string_view id) const;
    std::size_t size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

/// Line format, one term per line: `id | label | kind`. Blank lines and
/// lines starting with `#` are skipped; cells are trimmed. Throws
/// SyntaxError with codes MalformedLine, MalformedIri, UnknownKind,
/// DuplicateTermId.
Registry load_registry(const SourceUnit& src);

struct Binding {
    std::string name; // as written, optionally with an `actor/` prefix
    std::string term;
    Position pos;
};

/// Line format: `qualifiedName -> termId`; `//` starts a comment line
/// (`#` cannot, since message names begin with it). Throws SyntaxError with codes
/// MalformedLine and DuplicateBinding.
std::vector<Binding> load_annotations(const SourceUnit& src);

enum class NameKind { Record, Field, Message, State };

struct NamedItem {
    std::string qualified; // actor/rec.field, actor/#msg, actor/$State, actor/rec
    std::string local;     // the part after `actor/`
    NameKind kind;
    Position pos;
    std::optional<Term> term;
};

struct AnnotatedDefinition {
    std::string actor;
    std::vector<NamedItem> items; // declaration order: records, fields, states, messages

    std::vector<std::string> unbound() const; // local names of unbound fields, messages and states
    const Term* term_of(std::string_view local) const;
};

/// Every bindable name of `def`: records, fields, states, and the message
/// types it consumes or emits.
std::vector<NamedItem> bindable_names(const lang::ActorDefinition& def, const std::string& actor);

/// Attaches terms to names. Throws SyntaxError("UnknownQualifiedName") for
/// a binding naming something absent from `def` (or another actor) and
/// SyntaxError("UnknownTerm") for a term missing from the registry.
AnnotatedDefinition annotate(const lang::ActorDefinition& def, const std::string& actor,
                             const std::vector<Binding>& bindings, const Registry& registry);

/// Empty iff every field, message type and state is bound to a term of the
/// matching kind (Property, MessageKind, StateKind); record bindings are
/// optional but must be Concept. Codes: Unbound, KindMismatch.
std::vector<Diagnostic> check_strict(const AnnotatedDefinition& adef, const std::string& file = {});

} // namespace huuzlee::ontology
