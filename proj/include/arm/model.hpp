#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace arm {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConflictingFacts : DomainError {
    using DomainError::DomainError;
};

enum class EntityKind { Participant, Position };

struct Entity {
    int id = -1;  // dense 0..k-1 within each kind
    std::string surface;
    EntityKind kind = EntityKind::Participant;

    bool operator==(const Entity&) const = default;
};

enum class GameType { Ordering, Grouping, Assignment };

inline const char* to_string(GameType g) {
    switch (g) {
        case GameType::Ordering: return "ordering";
        case GameType::Grouping: return "grouping";
        case GameType::Assignment: return "assignment";
    }
    return "?";
}

enum class CellState : std::uint8_t { True, False, Unknown };

/// participants x positions matrix of three-valued cells.
class Assignment {
public:
    Assignment() = default;
    Assignment(int participants, int positions)
        : rows_(participants),
          cols_(positions),
          cells_(static_cast<std::size_t>(participants) * positions, CellState::Unknown) {}

    int participant_count() const { return rows_; }
    int position_count() const { return cols_; }

    CellState at(int p, int q) const { return cells_[static_cast<std::size_t>(p) * cols_ + q]; }
    void set(int p, int q, CellState s) { cells_[static_cast<std::size_t>(p) * cols_ + q] = s; }

    bool completed() const {
        for (CellState c : cells_)
            if (c == CellState::Unknown) return false;
        return true;
    }

    int count_in_row(int p, CellState s) const {
        int n = 0;
        for (int q = 0; q < cols_; ++q)
            if (at(p, q) == s) ++n;
        return n;
    }

    int count_in_column(int q, CellState s) const {
        int n = 0;
        for (int p = 0; p < rows_; ++p)
            if (at(p, q) == s) ++n;
        return n;
    }

    /// Index of the row's True cell, if any.
    std::optional<int> true_position(int p) const {
        for (int q = 0; q < cols_; ++q)
            if (at(p, q) == CellState::True) return q;
        return std::nullopt;
    }

    bool row_completed(int p) const {
        for (int q = 0; q < cols_; ++q)
            if (at(p, q) == CellState::Unknown) return false;
        return true;
    }

    const std::vector<CellState>& cells() const { return cells_; }

    bool operator==(const Assignment&) const = default;

    struct Hash {
        std::size_t operator()(const Assignment& a) const {
            std::size_t h = 1469598103934665603ull;
            for (CellState c : a.cells_) {
                h ^= static_cast<std::size_t>(c) + 1;
                h *= 1099511628211ull;
            }
            h ^= static_cast<std::size_t>(a.cols_);
            return h;
        }
    };

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<CellState> cells_;
};

struct Fact {
    int participant = -1;
    int position = -1;
    bool state = true;  // True/False only; Unknown is not a fact

    bool operator==(const Fact&) const = default;
};

// ---------------------------------------------------------------------------
// Logical constraint functions
// ---------------------------------------------------------------------------

enum class RelKind {
    Before,
    After,
    Last,      // p1 immediately before p2
    Next,      // p1 immediately after p2
    Adjacent,  // |pos(p1) - pos(p2)| == 1
    Same,
    Different,
    BeforeEqual,
    AfterEqual,
};

enum class CompKind { IfThen, IFF, And, Or, Unless, Neither };

enum class CountKind { FirstPos, LastPos };

enum class Polarity { Positive, Negated };

struct LogicalFunction;

struct Relational {
    RelKind kind;
    int p1;  // participant ids
    int p2;

    bool operator==(const Relational&) const = default;
};

struct ToFn {
    int participant;
    int position;
    Polarity polarity = Polarity::Positive;

    bool operator==(const ToFn&) const = default;
};

struct Compositional {
    CompKind kind;
    std::vector<LogicalFunction> set1;
    std::vector<LogicalFunction> set2;

    bool operator==(const Compositional&) const;
};

struct Counting {
    CountKind kind;
    int participant;
    int m;  // 1 <= m <= position count

    bool operator==(const Counting&) const = default;
};

struct LogicalFunction {
    std::variant<Relational, ToFn, Compositional, Counting> node;

    bool operator==(const LogicalFunction&) const = default;
};

inline bool Compositional::operator==(const Compositional& o) const {
    return kind == o.kind && set1 == o.set1 && set2 == o.set2;
}

inline const char* to_string(RelKind k) {
    switch (k) {
        case RelKind::Before: return "Before";
        case RelKind::After: return "After";
        case RelKind::Last: return "Last";
        case RelKind::Next: return "Next";
        case RelKind::Adjacent: return "Adjacent";
        case RelKind::Same: return "Same";
        case RelKind::Different: return "Different";
        case RelKind::BeforeEqual: return "BeforeEqual";
        case RelKind::AfterEqual: return "AfterEqual";
    }
    return "?";
}

inline const char* to_string(CompKind k) {
    switch (k) {
        case CompKind::IfThen: return "IfThen";
        case CompKind::IFF: return "IFF";
        case CompKind::And: return "And";
        case CompKind::Or: return "Or";
        case CompKind::Unless: return "Unless";
        case CompKind::Neither: return "Neither";
    }
    return "?";
}

inline const char* to_string(CountKind k) {
    return k == CountKind::FirstPos ? "FirstPos" : "LastPos";
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// The extracted world of one puzzle.
struct ScenarioContext {
    GameType game_type = GameType::Ordering;
    std::vector<Entity> participants;
    std::vector<Entity> positions;
    std::vector<Fact> facts;
    std::vector<std::string> rules;  // raw rule sentences
    std::map<int, int> group_capacities;  // position id -> capacity, optional
};

/// All cells Unknown except cells named by facts.
inline Assignment initial_assignment(const ScenarioContext& ctx) {
    Assignment a(static_cast<int>(ctx.participants.size()),
                 static_cast<int>(ctx.positions.size()));
    for (const Fact& f : ctx.facts) {
        CellState want = f.state ? CellState::True : CellState::False;
        CellState cur = a.at(f.participant, f.position);
        if (cur != CellState::Unknown && cur != want)
            throw ConflictingFacts("facts assign opposite states to cell (" +
                                   ctx.participants[f.participant].surface + ", " +
                                   ctx.positions[f.position].surface + ")");
        a.set(f.participant, f.position, want);
    }
    return a;
}

inline std::string render(const LogicalFunction& f, const ScenarioContext& ctx) {
    auto pname = [&](int id) { return ctx.participants[id].surface; };
    auto qname = [&](int id) { return ctx.positions[id].surface; };
    struct V {
        const ScenarioContext& ctx;
        decltype(pname)& pn;
        decltype(qname)& qn;
        std::string operator()(const Relational& r) const {
            return std::string(to_string(r.kind)) + "(" + pn(r.p1) + ", " + pn(r.p2) + ")";
        }
        std::string operator()(const ToFn& t) const {
            std::string s = "To(" + pn(t.participant) + ", " + qn(t.position) + ")";
            return t.polarity == Polarity::Negated ? "Not" + s : s;
        }
        std::string operator()(const Compositional& c) const {
            auto set = [&](const std::vector<LogicalFunction>& fs) {
                std::string s = "{";
                for (std::size_t i = 0; i < fs.size(); ++i) {
                    if (i) s += ", ";
                    s += render(fs[i], ctx);
                }
                return s + "}";
            };
            return std::string(to_string(c.kind)) + "(" + set(c.set1) + ", " + set(c.set2) + ")";
        }
        std::string operator()(const Counting& c) const {
            return std::string(to_string(c.kind)) + "(" + pn(c.participant) + ", " +
                   std::to_string(c.m) + ")";
        }
    };
    return std::visit(V{ctx, pname, qname}, f.node);
}

}  // namespace arm
