#pragma once

#include "wreathdp/equations.hpp"
#include "wreathdp/gadgets.hpp"
#include "wreathdp/group.hpp"
#include "wreathdp/interp.hpp"
#include "wreathdp/laurent.hpp"
#include "wreathdp/reduction.hpp"
#include "wreathdp/wreath.hpp"
