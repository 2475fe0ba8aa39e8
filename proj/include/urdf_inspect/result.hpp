#pragma once

#include <stdexcept>
#include <type_traits>
#include <utility>
#include <variant>

namespace urdf_inspect {

// Thrown when a Result is accessed on the wrong alternative.
class BadResultAccess : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Value-or-error holder. Failures that are data (parse failures, tree
// errors, structural mismatches) travel through this instead of exceptions.
template <typename T, typename E>
class Result {
    static_assert(!std::is_same_v<T, E>, "value and error types must differ");

public:
    Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
    Result(E error) : storage_(std::in_place_index<1>, std::move(error)) {}

    [[nodiscard]] bool ok() const noexcept { return storage_.index() == 0; }
    explicit operator bool() const noexcept { return ok(); }

    [[nodiscard]] const T& value() const& {
        if (!ok()) throw BadResultAccess("Result holds an error");
        return std::get<0>(storage_);
    }
    [[nodiscard]] T&& value() && {
        if (!ok()) throw BadResultAccess("Result holds an error");
        return std::get<0>(std::move(storage_));
    }
    [[nodiscard]] const E& error() const& {
        if (ok()) throw BadResultAccess("Result holds a value");
        return std::get<1>(storage_);
    }

    const T& operator*() const& { return value(); }
    const T* operator->() const { return &value(); }

private:
    std::variant<T, E> storage_;
};

}  // namespace urdf_inspect
