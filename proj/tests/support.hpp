#pragma once

#include <optional>

#include "seqcast/error.hpp"

template <typename F>
std::optional<seqcast::ErrorCode> error_of(F&& f) {
    try {
        f();
    } catch (const seqcast::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

#define CHECK_ERROR(expr, code_) CHECK(error_of([&] { (void)(expr); }) == std::optional(seqcast::ErrorCode::code_))
