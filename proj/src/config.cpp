#include "profusion/config.hpp"

namespace profusion {

namespace {
Caps g_caps;
}

const Caps& caps() { return g_caps; }
void set_caps(const Caps& c) { g_caps = c; }

CapsOverride::CapsOverride(const Caps& c) : saved_(g_caps) { g_caps = c; }
CapsOverride::~CapsOverride() { g_caps = saved_; }

}  // namespace profusion
