#include "czcal/circuit.hpp"

#include <cmath>
#include <sstream>

#include "czcal/error.hpp"
#include "czcal/numfmt.hpp"

namespace czcal {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

char qubit_char(Qubit q) { return q == Qubit::kA ? 'A' : 'B'; }

Qubit parse_qubit(std::string_view s) {
  if (s == "A") return Qubit::kA;
  if (s == "B") return Qubit::kB;
  throw InvalidCircuit("unknown qubit '" + std::string(s) + "'");
}

std::string serialize_outcomes(OutcomeSet set) {
  std::string out;
  for (Outcome o : kAllOutcomes) {
    if (!set.contains(o)) continue;
    if (!out.empty()) out += ',';
    out += outcome_label(o);
  }
  return out.empty() ? "-" : out;
}

OutcomeSet parse_outcomes(std::string_view s) {
  OutcomeSet set;
  if (s == "-") return set;
  for (std::string_view tok : split(s, ',')) set.insert(parse_outcome(tok));
  return set;
}

std::string serialize_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::kCz:
      return "cz";
    case GateKind::kX:
      return std::string("x@") + qubit_char(g.target);
    case GateKind::kRx:
      return "rx(" + format_double(g.angle) + ")@" + qubit_char(g.target);
    case GateKind::kRy:
      return "ry(" + format_double(g.angle) + ")@" + qubit_char(g.target);
  }
  throw InvalidCircuit("unknown gate kind");
}

Gate parse_gate(std::string_view tok) {
  if (tok == "cz") return Gate::cz();
  const auto at = tok.rfind('@');
  if (at == std::string_view::npos) throw InvalidCircuit("gate token without target: '" + std::string(tok) + "'");
  const Qubit q = parse_qubit(tok.substr(at + 1));
  const std::string_view head = tok.substr(0, at);
  if (head == "x") return Gate::x(q);
  if (head.size() > 4 && head.back() == ')' && head[2] == '(') {
    const double angle = parse_double(head.substr(3, head.size() - 4));
    if (head.substr(0, 2) == "rx") return Gate::rx(q, angle);
    if (head.substr(0, 2) == "ry") return Gate::ry(q, angle);
  }
  throw InvalidCircuit("unknown gate token '" + std::string(tok) + "'");
}

}  // namespace

std::string_view outcome_label(Outcome o) {
  switch (o) {
    case Outcome::k00: return "00";
    case Outcome::k01: return "01";
    case Outcome::k10: return "10";
    case Outcome::k11: return "11";
  }
  throw Error("invalid outcome");
}

Outcome parse_outcome(std::string_view label) {
  for (Outcome o : kAllOutcomes) {
    if (outcome_label(o) == label) return o;
  }
  throw Error("unknown outcome label '" + std::string(label) + "'");
}

std::string_view phase_class_name(PhaseClass p) {
  switch (p) {
    case PhaseClass::k00_01: return "phi00_01";
    case PhaseClass::k10_11: return "phi10_11";
    case PhaseClass::k01_11: return "phi01_11";
  }
  throw Error("invalid phase class");
}

PhaseClass parse_phase_class(std::string_view text) {
  for (PhaseClass p : kAllPhaseClasses) {
    if (phase_class_name(p) == text) return p;
  }
  throw Error("unknown phase class '" + std::string(text) + "'");
}

std::string to_string(CircuitLabel label) {
  std::string out(phase_class_name(label.phase));
  out += label.quadrature == Quadrature::kI ? "/I" : "/Q";
  return out;
}

CircuitLabel parse_circuit_label(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw Error("bad circuit label '" + std::string(text) + "'");
  CircuitLabel label;
  label.phase = parse_phase_class(text.substr(0, slash));
  const std::string_view quad = text.substr(slash + 1);
  if (quad == "I") {
    label.quadrature = Quadrature::kI;
  } else if (quad == "Q") {
    label.quadrature = Quadrature::kQ;
  } else {
    throw Error("bad circuit label '" + std::string(text) + "'");
  }
  return label;
}

int count_cz(const CircuitSpec& circuit) {
  int n = 0;
  for (const Layer& layer : circuit.layers) {
    for (const Gate& g : layer) n += g.kind == GateKind::kCz ? 1 : 0;
  }
  return n;
}

void validate(const CircuitSpec& circuit) {
  if (!circuit.plus_outcomes.disjoint(circuit.minus_outcomes)) {
    throw InvalidCircuit("plus and minus outcome sets overlap");
  }
  for (const Layer& layer : circuit.layers) {
    bool used[2] = {false, false};
    for (const Gate& g : layer) {
      switch (g.kind) {
        case GateKind::kCz:
          if (layer.size() != 1) throw InvalidCircuit("cz must occupy its own layer");
          break;
        case GateKind::kRx:
        case GateKind::kRy:
        case GateKind::kX: {
          const auto q = static_cast<unsigned>(g.target);
          if (q > 1) throw InvalidCircuit("gate targets a nonexistent qubit");
          if (used[q]) throw InvalidCircuit("two gates on one qubit in a layer");
          used[q] = true;
          if (!std::isfinite(g.angle)) throw InvalidCircuit("non-finite rotation angle");
          break;
        }
        default:
          throw InvalidCircuit("unknown gate kind");
      }
    }
  }
}

std::string serialize(const CircuitSpec& circuit) {
  std::ostringstream os;
  os << to_string(circuit.label) << " k=" << circuit.k
     << " plus=" << serialize_outcomes(circuit.plus_outcomes)
     << " minus=" << serialize_outcomes(circuit.minus_outcomes) << " |";
  for (std::size_t i = 0; i < circuit.layers.size(); ++i) {
    if (i > 0) os << " ;";
    for (const Gate& g : circuit.layers[i]) os << ' ' << serialize_gate(g);
  }
  return os.str();
}

CircuitSpec parse_circuit(std::string_view line) {
  const auto bar = line.find('|');
  if (bar == std::string_view::npos) throw InvalidCircuit("missing '|' separator");
  const auto header = split_ws(line.substr(0, bar));
  if (header.size() != 4) throw InvalidCircuit("circuit header needs 4 fields");

  CircuitSpec c;
  c.label = parse_circuit_label(header[0]);
  auto field = [](std::string_view tok, std::string_view key) {
    if (tok.substr(0, key.size()) != key) {
      throw InvalidCircuit("expected '" + std::string(key) + "' in '" + std::string(tok) + "'");
    }
    return tok.substr(key.size());
  };
  c.k = static_cast<int>(parse_int(field(header[1], "k=")));
  c.plus_outcomes = parse_outcomes(field(header[2], "plus="));
  c.minus_outcomes = parse_outcomes(field(header[3], "minus="));

  const std::string_view body = trim(line.substr(bar + 1));
  if (!body.empty()) {
    for (std::string_view layer_text : split(body, ';')) {
      Layer layer;
      for (std::string_view tok : split_ws(layer_text)) layer.push_back(parse_gate(tok));
      if (layer.empty()) throw InvalidCircuit("empty layer");
      c.layers.push_back(std::move(layer));
    }
  }
  validate(c);
  return c;
}

std::string serialize(const std::vector<CircuitSpec>& circuits) {
  std::string out;
  for (const CircuitSpec& c : circuits) {
    out += serialize(c);
    out += '\n';
  }
  return out;
}

std::vector<CircuitSpec> parse_circuits(std::string_view text) {
  std::vector<CircuitSpec> out;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    out.push_back(parse_circuit(line));
  }
  return out;
}

}  // namespace czcal
