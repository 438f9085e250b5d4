"""
The serializer module contains functions that allow
serialization / deserialization of nmlab objects (schedules,
run configurations, curves, count records, reports) to/from
HDF files.
"""

import enum
import importlib
import logging
import numbers
import re

import h5py
import numpy as np


logger = logging.getLogger(__name__)

NONE_TYPE = 'builtins.NoneType'
LIST_TYPE = 'builtins.list'
TUPLE_TYPE = 'builtins.tuple'
DICT_TYPE = 'builtins.dict'
STR_TYPE = 'builtins.str'
BOOL_TYPE = 'builtins.bool'


class SerializationError(Exception):
    pass


class Serializer(object):

    def serialize(self, parent, name, skip=()):
        group = parent.create_group(name)

        group.attrs['type'] = _full_class_name(self)

        for var_name, var_value in self.__dict__.items():

            if callable(var_value):
                continue

            if var_name in skip:
                continue

            do_serialize(group, var_value, var_name)

    @classmethod
    def deserialize(cls, group):
        class_ = group.attrs.get('type')

        if class_ == NONE_TYPE:
            return None
        if class_ in (LIST_TYPE, TUPLE_TYPE):
            items = [do_deserialize(group[str(idx)])
                     for idx in range(len(group.keys()))]
            return items if class_ == LIST_TYPE else tuple(items)
        if class_ == DICT_TYPE:
            return {key: do_deserialize(value)
                    for key, value in group.items()}

        instance = _init_raw_object(class_)
        for var_name, var_value in group.items():
            instance.__dict__[var_name] = do_deserialize(var_value)

        if isinstance(instance, Serializer):
            instance.post_deserialize()

        return instance

    def post_deserialize(self):
        """
        Override this method in derived classes if further initialization
        is necessary after deserialization from HDF.
        """
        pass


def do_serialize(group, value, name):
    if isinstance(value, Serializer):
        value.serialize(group, name)
    elif isinstance(value, enum.Enum):
        ds = group.create_dataset(name, data=value.value)
        ds.attrs['type'] = _full_class_name(value)
    elif value is None:
        group.create_group(name).attrs['type'] = NONE_TYPE
    elif isinstance(value, dict):
        sub = group.create_group(name)
        sub.attrs['type'] = DICT_TYPE
        for key, item in value.items():
            if callable(item):
                continue
            do_serialize(sub, item, str(key))
    elif isinstance(value, (list, tuple)):
        sub = group.create_group(name)
        sub.attrs['type'] = LIST_TYPE if isinstance(value, list) \
            else TUPLE_TYPE
        for idx, item in enumerate(value):
            do_serialize(sub, item, str(idx))
    elif isinstance(value, str):
        ds = group.create_dataset(name, data=value,
                                  dtype=h5py.string_dtype())
        ds.attrs['type'] = STR_TYPE
    elif isinstance(value, (bool, np.bool_)):
        ds = group.create_dataset(name, data=bool(value))
        ds.attrs['type'] = BOOL_TYPE
    elif isinstance(value, (numbers.Number, np.ndarray)):
        group.create_dataset(name, data=value)
    else:
        raise SerializationError('Cannot serialize variable %s' % name)


def do_deserialize(value):
    if isinstance(value, h5py.Dataset):
        type_ = value.attrs.get('type')
        if value.shape != ():
            return value[...]
        item = value[()]
        if isinstance(item, bytes):
            item = item.decode('utf-8')
        elif isinstance(item, np.generic):
            item = item.item()
        if type_ == BOOL_TYPE:
            return bool(item)
        if type_ is not None and type_ != STR_TYPE:
            return _class_from_full_class_name(type_)(item)
        return item
    elif isinstance(value, h5py.Group):
        return Serializer.deserialize(value)
    raise SerializationError('Cannot deserialize object %s' % value.name)


def _full_class_name(obj):
    return '%s.%s' % (obj.__class__.__module__, obj.__class__.__name__)


def _init_raw_object(full_class_name):
    """
    Create an object without calling its constructor.

    Parameters
    ----------
    full_class_name: str
        fully qualified name of the class (package.classname)

    Returns
    -------
    Instance of the requested class with no properties
    initialized.
    """
    class_ = _class_from_full_class_name(full_class_name)
    return class_.__new__(class_)


def _class_from_full_class_name(full_class_name):
    pattern = re.compile('(.+)[.]([^.]+)')
    match = pattern.match(full_class_name)
    if match is None:
        raise SerializationError(
            'Invalid type attribute "%s"' % full_class_name)
    module = importlib.import_module(match[1])
    class_ = getattr(module, match[2], None)
    if class_ is None:
        raise SerializationError(
            'Unknown class "%s"' % full_class_name)
    return class_
