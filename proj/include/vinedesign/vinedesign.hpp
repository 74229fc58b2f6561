#pragma once

#include "vinedesign/geometry.hpp"
#include "vinedesign/avoid.hpp"
#include "vinedesign/model.hpp"
#include "vinedesign/fitness.hpp"
#include "vinedesign/rankpart.hpp"
#include "vinedesign/ga.hpp"
#include "vinedesign/oracle.hpp"
#include "vinedesign/task_io.hpp"
#include "vinedesign/report.hpp"
