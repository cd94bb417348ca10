#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "manin/field.hpp"
#include "manin/ideals.hpp"
#include "manin/units.hpp"

namespace manin {

FieldDescriptor::~FieldDescriptor() = default;

static Int parse_sqrt_arg(const std::string& spec) {
    // spec = "Q(sqrt:<m>)"
    const std::string pre = "Q(sqrt:";
    if (spec.size() < pre.size() + 2 || spec.compare(0, pre.size(), pre) != 0 ||
        spec.back() != ')')
        throw std::invalid_argument("malformed field spec: " + spec);
    std::string body = spec.substr(pre.size(), spec.size() - pre.size() - 1);
    if (body.empty()) throw std::invalid_argument("malformed field spec: " + spec);
    size_t at = (body[0] == '-' || body[0] == '+') ? 1 : 0;
    if (at == body.size()) throw std::invalid_argument("malformed field spec: " + spec);
    for (size_t i = at; i < body.size(); ++i)
        if (!isdigit((unsigned char)body[i]))
            throw std::invalid_argument("malformed field spec: " + spec);
    return Int(body);
}

static std::unique_ptr<FieldDescriptor> build(const std::string& spec,
                                              const FieldOptions& options) {
    auto K = std::make_unique<FieldDescriptor>();
    K->options = options;
    K->spec = spec;
    if (spec == "Q") {
        K->d = 0;
        K->discriminant = 1;
        K->degree = 1;
        K->r = 1;
        K->s = 0;
        K->q = 0;
    } else {
        Int m = parse_sqrt_arg(spec);
        if (m == 0 || m == 1) throw std::invalid_argument("field spec needs m != 0, 1");
        if (!is_squarefree(abs(m))) throw std::invalid_argument("field spec needs squarefree m");
        K->d = m;
        K->degree = 2;
        if (m > 0) {
            K->r = 2;
            K->s = 0;
            K->q = 1;
        } else {
            K->r = 0;
            K->s = 1;
            K->q = 0;
        }
        Int mod4 = ((m % 4) + 4) % 4;
        K->half_basis = (mod4 == 1);
        K->discriminant = K->half_basis ? m : 4 * m;
        if (K->half_basis) {
            K->wt = 1;
            K->wn = (m - 1) / 4;
        } else {
            K->wt = 0;
            K->wn = m;
        }
    }
    // unit data first (the real-quadratic principality scan needs eps)
    UnitGroupData U = unit_group_data(K.get());
    K->omega_roots = U.omega;
    K->torsion = U.torsion;
    K->fundamental_unit = U.eps;
    K->regulator = U.regulator;
    ClassGroup G = compute_class_group(K.get());
    K->h = G.h;
    K->class_reps = G.reps;
    return K;
}

const FieldDescriptor* parse_field_spec(const std::string& spec, const FieldOptions& options) {
    static std::mutex mu;
    static std::map<std::tuple<std::string, int, bool>, std::unique_ptr<FieldDescriptor>> cache;
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(spec, (int)options.tie_break, options.inverse_unit);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.get();
    auto built = build(spec, options);
    return cache.emplace(std::move(key), std::move(built)).first->second.get();
}

}  // namespace manin
