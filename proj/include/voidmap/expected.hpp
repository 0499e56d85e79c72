#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace voidmap {

// Minimal result type used by fallible parsers. T and E must be distinct types.
template <typename T, typename E>
class Expected {
public:
  Expected(T value) : v_(std::move(value)) {}
  Expected(E error) : v_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  T& value() {
    assert(ok());
    return std::get<T>(v_);
  }
  const T& value() const {
    assert(ok());
    return std::get<T>(v_);
  }
  T& operator*() { return value(); }
  const T& operator*() const { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

  E& error() {
    assert(!ok());
    return std::get<E>(v_);
  }
  const E& error() const {
    assert(!ok());
    return std::get<E>(v_);
  }

private:
  std::variant<T, E> v_;
};

}  // namespace voidmap
