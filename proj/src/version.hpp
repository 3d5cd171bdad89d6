#pragma once

#define PSEUDOEXP_VERSION "1.0.0"
