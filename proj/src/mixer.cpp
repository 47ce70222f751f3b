#include "kif/mixer.hpp"

#include <future>
#include <set>

#include "kif/errors.hpp"

namespace kif::mixer {

MixerStore::MixerStore(std::vector<StorePtr> children, MixerOptions options, StoreOptions store_options)
    : Store(std::move(store_options)), children_(std::move(children)), mixer_options_(options) {
    if (children_.empty()) throw InvalidValue("a mixer needs at least one child store");
}

std::vector<std::string> MixerStore::diagnostics() const {
    std::lock_guard lock(mutex_);
    return diagnostics_;
}

void MixerStore::handle_failure(std::size_t i, std::exception_ptr e) const {
    auto prefix = "child " + std::to_string(i) + ": ";
    try {
        std::rethrow_exception(e);
    } catch (const TransportError& x) {
        if (!mixer_options_.lenient) throw TransportError(prefix + x.what(), x.url(), x.status());
        std::lock_guard lock(mutex_);
        diagnostics_.push_back(prefix + x.what());
    } catch (const UnsupportedFingerprint&) {
        throw;  // a property of the pattern, not of the child
    } catch (const std::exception& x) {
        if (!mixer_options_.lenient) throw Error(prefix + x.what());
        std::lock_guard lock(mutex_);
        diagnostics_.push_back(prefix + x.what());
    }
}

template <class R, class F>
std::vector<std::optional<R>> MixerStore::each_child(F f) const {
    std::vector<std::optional<R>> out(children_.size());
    std::vector<std::exception_ptr> errors(children_.size());
    if (mixer_options_.parallel) {
        std::vector<std::future<R>> futures;
        for (const auto& child : children_) futures.push_back(std::async(std::launch::async, f, std::cref(*child)));
        for (std::size_t i = 0; i < futures.size(); ++i) {
            try {
                out[i] = futures[i].get();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < children_.size(); ++i) {
            try {
                out[i] = f(*children_[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    }
    // Failures surface in child order, after every child has finished.
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (errors[i]) handle_failure(i, errors[i]);
    return out;
}

StatementStream MixerStore::filter(const FilterPattern& pattern, std::optional<std::size_t> limit) const {
    pattern.check_supported();
    if (limit && *limit == 0) return {};
    auto fetch = [pattern, limit](const Store& child) { return child.filter(pattern, limit).collect(); };

    if (mixer_options_.parallel) {
        std::vector<Statement> merged;
        std::set<Statement> seen;
        for (auto& part : each_child<std::vector<Statement>>(fetch)) {
            if (!part) continue;
            for (auto& s : *part) {
                if (limit && merged.size() >= *limit) break;
                if (seen.insert(s).second) merged.push_back(std::move(s));
            }
        }
        return StatementStream::of(std::move(merged));
    }

    // Sequential: a child is called only once the previous ones are used up.
    struct State {
        std::size_t child = 0;
        std::vector<Statement> current;
        std::size_t pos = 0;
        std::size_t yielded = 0;
        std::set<Statement> seen;
    };
    auto st = std::make_shared<State>();
    auto self = shared_from_this();
    return StatementStream([self, st, fetch, limit]() -> std::optional<Statement> {
        if (limit && st->yielded >= *limit) return std::nullopt;
        for (;;) {
            while (st->pos < st->current.size()) {
                Statement s = std::move(st->current[st->pos++]);
                if (!st->seen.insert(s).second) continue;
                ++st->yielded;
                return s;
            }
            if (st->child >= self->children_.size()) return std::nullopt;
            std::size_t i = st->child++;
            st->current.clear();
            st->pos = 0;
            try {
                st->current = fetch(*self->children_[i]);
            } catch (...) {
                self->handle_failure(i, std::current_exception());
            }
        }
    });
}

bool MixerStore::contains(const Statement& statement) const {
    if (!mixer_options_.parallel) {
        for (std::size_t i = 0; i < children_.size(); ++i) {
            try {
                if (children_[i]->contains(statement)) return true;
            } catch (...) {
                handle_failure(i, std::current_exception());
            }
        }
        return false;
    }
    for (const auto& r : each_child<bool>([&](const Store& c) { return c.contains(statement); }))
        if (r && *r) return true;
    return false;
}

std::vector<AnnotationsResult> MixerStore::get_annotations(const std::vector<Statement>& statements) const {
    auto parts = each_child<std::vector<AnnotationsResult>>([&](const Store& c) { return c.get_annotations(statements); });
    std::vector<AnnotationsResult> out;
    for (std::size_t k = 0; k < statements.size(); ++k) {
        std::vector<AnnotationRecord> records;
        for (const auto& part : parts)
            if (part)
                for (const auto& r : (*part)[k].second) records.push_back(r);
        out.emplace_back(statements[k], with_extra_references(AnnotationRecordSet(std::move(records))));
    }
    return out;
}

std::vector<DescriptorResult> MixerStore::get_descriptor(const std::vector<Entity>& entities,
                                                         const std::string& language) const {
    auto parts = each_child<std::vector<DescriptorResult>>(
        [&](const Store& c) { return c.get_descriptor(entities, language); });
    std::vector<DescriptorResult> out;
    for (std::size_t k = 0; k < entities.size(); ++k) {
        Descriptor d;
        for (const auto& part : parts) {
            if (part && !(*part)[k].second.empty()) {
                d = (*part)[k].second;
                break;
            }
        }
        out.emplace_back(entities[k], std::move(d));
    }
    return out;
}

std::shared_ptr<const MixerStore> mixer_store(std::vector<StorePtr> children, MixerOptions options,
                                              StoreOptions store_options) {
    return std::make_shared<MixerStore>(std::move(children), options, std::move(store_options));
}

} // namespace kif::mixer
