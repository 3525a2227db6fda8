#include "newsim/log.hpp"

#include <iostream>
#include <mutex>

namespace newsim::log {
namespace {

std::mutex g_mutex;

void default_sink(std::string_view level, std::string_view message) {
    std::cerr << '[' << level << "] " << message << '\n';
}

Sink& current() {
    static Sink sink = default_sink;
    return sink;
}

void emit(std::string_view level, std::string_view message) {
    std::lock_guard lock(g_mutex);
    if (current()) current()(level, message);
}

} // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(g_mutex);
    Sink previous = std::move(current());
    current() = sink ? std::move(sink) : Sink(default_sink);
    return previous;
}

void warn(std::string_view message) { emit("warn", message); }
void info(std::string_view message) { emit("info", message); }

} // namespace newsim::log
