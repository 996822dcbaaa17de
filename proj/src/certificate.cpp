#include "hbsg/certificate.hpp"

#include <sstream>

namespace hbsg {

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::eq: return "==";
  }
  return "?";
}

const char* to_string(Rounding rounding) {
  switch (rounding) {
    case Rounding::none: return "none";
    case Rounding::exact: return "exact";
    case Rounding::ceil: return "ceil";
    case Rounding::floor: return "floor";
  }
  return "?";
}

const char* to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::given: return "given";
    case MeasureKind::size: return "size";
    case MeasureKind::sigma_size: return "sigma_size";
    case MeasureKind::energy: return "energy";
    case MeasureKind::sigma_energy: return "sigma_energy";
    case MeasureKind::sumset_size: return "sumset_size";
    case MeasureKind::iterated_sumset_size: return "iterated_sumset_size";
    case MeasureKind::fiber_overlap: return "fiber_overlap";
  }
  return "?";
}

const char* to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::certificate: return "certificate";
    case EntryKind::containment: return "containment";
    case EntryKind::selection: return "selection";
    case EntryKind::derivation: return "derivation";
    case EntryKind::reassignment: return "reassignment";
    case EntryKind::branch: return "branch";
    case EntryKind::halt: return "halt";
  }
  return "?";
}

bool satisfies(std::strong_ordering order, Relation relation) {
  switch (relation) {
    case Relation::ge: return order >= 0;
    case Relation::gt: return order > 0;
    case Relation::le: return order <= 0;
    case Relation::lt: return order < 0;
    case Relation::eq: return order == 0;
  }
  return false;
}

Factor factor(std::string label, BigInt value, Measure measure, Rational exponent) {
  return Factor{std::move(label), std::move(measure), std::move(value), std::move(exponent)};
}

Expression& Expression::times(Factor f) {
  factors.push_back(std::move(f));
  return *this;
}

Expression& Expression::scale(const Rational& c) {
  coefficient *= c;
  return *this;
}

PowerProduct Expression::to_power_product() const {
  PowerProduct product(coefficient);
  for (const auto& f : factors) product.times(f.value, f.exponent);
  return product;
}

std::string Expression::render() const {
  std::ostringstream out;
  bool first = true;
  if (coefficient != 1 || factors.empty()) {
    out << hbsg::to_string(coefficient);
    first = false;
  }
  for (const auto& f : factors) {
    if (!first) out << " * ";
    first = false;
    out << f.label << "[" << f.value.str() << "]";
    if (f.exponent != 1) out << "^(" << hbsg::to_string(f.exponent) << ")";
  }
  return out.str();
}

void Certificate::rebind(const std::map<std::string, std::string>& names) {
  auto rename = [&](Expression& e) {
    for (auto& f : e.factors) {
      for (auto& operand : f.measure.operands) {
        if (auto it = names.find(operand); it != names.end()) operand = it->second;
      }
    }
  };
  rename(lhs);
  rename(rhs);
}

Certificate certify(std::string op, std::string statement, Expression lhs, Relation relation,
                    Expression rhs) {
  Certificate cert;
  cert.op = std::move(op);
  cert.statement = std::move(statement);
  cert.lhs = std::move(lhs);
  cert.relation = relation;
  cert.rhs = std::move(rhs);

  PowerProduct left = cert.lhs.to_power_product();
  PowerProduct right = cert.rhs.to_power_product();
  Comparison cmp = compare(left, right);
  cert.pass = satisfies(cmp.order, relation);
  cert.exact = cmp.exact;

  // Integer lhs: record the rounded threshold it is effectively tested against.
  if (left.exact_integer()) {
    if (auto exact_rhs = right.exact_integer()) {
      cert.rounding = Rounding::exact;
      switch (relation) {
        case Relation::gt: cert.threshold = *exact_rhs + 1; break;
        case Relation::lt: cert.threshold = *exact_rhs - 1; break;
        default: cert.threshold = *exact_rhs; break;
      }
    } else if (relation == Relation::ge || relation == Relation::gt) {
      if (relation == Relation::ge) {
        cert.threshold = ceil_value(right);
        cert.rounding = Rounding::ceil;
      } else if (auto f = floor_value(right)) {
        cert.threshold = *f + 1;
        cert.rounding = Rounding::floor;
      }
    } else if (relation == Relation::le || relation == Relation::lt) {
      if (relation == Relation::le) {
        cert.threshold = floor_value(right);
        cert.rounding = Rounding::floor;
      } else if (auto c = ceil_value(right)) {
        cert.threshold = *c - 1;
        cert.rounding = Rounding::ceil;
      }
    }
    if (!cert.threshold) cert.rounding = Rounding::none;
  }
  return cert;
}

const LedgerEntry& CertificateLedger::append(LedgerEntry entry) {
  entry.index = entries_.size();
  entries_.push_back(std::move(entry));
  return entries_.back();
}

std::size_t CertificateLedger::binding_failures() const {
  std::size_t failures = 0;
  for (const auto& e : entries_) {
    if (e.cert && e.cert->binding && !e.cert->pass) ++failures;
    if (e.containment && !e.containment->pass) ++failures;
  }
  return failures;
}

}  // namespace hbsg
