#pragma once
// A store presenting the virtual union of child stores.
//
// Results merge in child order, then in each child's own order, with
// duplicates dropped by statement identity. Parallel dispatch changes when
// children are called, never the merged order.

#include <mutex>
#include <string>
#include <vector>

#include "kif/store.hpp"

namespace kif::mixer {

struct MixerOptions {
    bool parallel = false;
    // Skip failing children (recording a diagnostic) instead of failing.
    bool lenient = false;
};

class MixerStore final : public Store, public std::enable_shared_from_this<MixerStore> {
public:
    // Throws InvalidValue when `children` is empty.
    MixerStore(std::vector<StorePtr> children, MixerOptions options, StoreOptions store_options = {});

    StatementStream filter(const FilterPattern& pattern, std::optional<std::size_t> limit = {}) const override;
    bool contains(const Statement& statement) const override;
    std::vector<AnnotationsResult> get_annotations(const std::vector<Statement>& statements) const override;
    std::vector<DescriptorResult> get_descriptor(const std::vector<Entity>& entities,
                                                 const std::string& language = "en") const override;

    const std::vector<StorePtr>& children() const noexcept { return children_; }
    // Failures skipped in lenient mode, as "child <i>: <message>".
    std::vector<std::string> diagnostics() const;

private:
    // Calls `f` on every child (concurrently when parallel) and returns the
    // results in child order; skipped children yield nullopt.
    template <class R, class F>
    std::vector<std::optional<R>> each_child(F f) const;

    // Rethrows the in-flight exception of child `i` per the failure policy;
    // returns normally when it was skipped.
    void handle_failure(std::size_t i, std::exception_ptr e) const;

    std::vector<StorePtr> children_;
    MixerOptions mixer_options_;
    mutable std::mutex mutex_;
    mutable std::vector<std::string> diagnostics_;
};

std::shared_ptr<const MixerStore> mixer_store(std::vector<StorePtr> children, MixerOptions options = {},
                                              StoreOptions store_options = {});

} // namespace kif::mixer
