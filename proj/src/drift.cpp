#include "fibdrift/errors.hpp"
